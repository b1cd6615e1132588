//! Extracting both signatures from a distinguisher of advantage Δ.

use qpke::base::BaseParams;
use qpke::games::demos::extractor_demo;
use qpke::Profile;

fn main() {
    let p = Profile::toy();
    let params = BaseParams { sig: p.sig, u: p.u };
    for delta in [1.0, 0.8, 0.6, 0.3, 0.0] {
        let r = extractor_demo(params, delta, 2000, 1).unwrap();
        println!(
            "Δ = {delta:.1}: rate {:.3} [{:.3}, {:.3}], exact {:.3}, floor Δ²/4 = {:.3}",
            r.success.rate, r.success.low, r.success.high, r.closed_form, r.analytic_floor
        );
    }
}
