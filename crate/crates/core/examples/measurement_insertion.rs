//! Inserting a k-outcome measurement costs at most a factor k.

use qpke::base::BaseParams;
use qpke::games::demos::{bz_classical_circuit, bz_factor_check, bz_key_circuit};
use qpke::Profile;
use qsim::bits;

fn main() {
    let p = Profile::toy();
    let params = BaseParams { sig: p.sig, u: p.u };
    for k_bits in [1, 2] {
        let r = bz_factor_check(&bz_key_circuit(params, k_bits, 2).unwrap(), 5000, 2).unwrap();
        println!(
            "k = {}: Pr {:.3} (exact {}), Pr' {:.3} (exact {}), ratio {:.3}",
            r.k, r.pr.rate, r.exact_pr, r.pr_measured.rate, r.exact_pr_measured, r.ratio
        );
    }
    let r = bz_factor_check(&bz_classical_circuit(bits("10")).unwrap(), 1000, 3).unwrap();
    println!("classical input: ratio {:.3}", r.ratio);
}
