//! Parity law of Hadamard outcomes on honest keys, and TV distance to the
//! exact law on a small two-branch state.

use qpke::base::BaseParams;
use qpke::games::demos::hadamard_stats;
use qpke::Profile;

fn main() {
    let p = Profile::toy();
    let params = BaseParams { sig: p.sig, u: p.u };
    for n in [1000, 10_000, 50_000] {
        let h = hadamard_stats(params, n, 5).unwrap();
        println!("{n:>6} samples: parity law {}/{}, TV {:.4}", h.parity_ok, h.samples, h.tv);
    }
}
