//! Key substitution against the base scheme and against the strawman that
//! skips signature verification.

use qpke::base::{BaseParams, BaseScheme};
use qpke::games::strawman::NoSigStrawman;
use qpke::games::{run_game, GameId, GameSpec, KeySwap, KnownBranch};
use qpke::Profile;

fn main() {
    let p = Profile::toy();
    let params = BaseParams { sig: p.sig, u: p.u };
    let spec = GameSpec::new(GameId::Cpa, 1, 200, 11);

    let base = run_game(&BaseScheme::new(params, 1), &spec, &mut KeySwap::new()).unwrap().summary;
    println!("keyswap vs base:        {} / 200 ⊥, win rate {:.3}", base.bottoms, base.wins.rate);
    let base = run_game(&BaseScheme::new(params, 1), &spec, &mut KnownBranch::new()).unwrap().summary;
    println!("known-branch vs base:   {} / 200 ⊥, win rate {:.3}", base.bottoms, base.wins.rate);

    let straw = run_game(&NoSigStrawman::new(params, 1), &spec, &mut KnownBranch::new()).unwrap().summary;
    println!("known-branch vs nosig:  {} / 200 ⊥, win rate {:.3}", straw.bottoms, straw.wins.rate);
}
