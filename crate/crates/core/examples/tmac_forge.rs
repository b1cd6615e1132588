//! Scripted double-sign attempts against a single token.

use qpke::games::tmac_forge::{double_sign_trials, ForgeStrategy};
use qpke::primitives::TmacParams;

fn main() {
    let params = TmacParams::new(8, 16).unwrap();
    for s in ForgeStrategy::ALL {
        let r = double_sign_trials(params, s, 5000, 8).unwrap();
        println!("{s:?}: rate {:.4}, analytic {:.4}", r.rate.rate, r.analytic);
    }
}
