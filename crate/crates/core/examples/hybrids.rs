//! Hybrid 0, 1 and 2 on the single-bit base scheme.

use qpke::base::BaseParams;
use qpke::games::hybrid::{run_hybrid, HonestHybrid, HybridAdversary, MeasureAndCopy, SecretHolder};
use qpke::games::{GameId, GameSpec};
use qpke::Profile;

fn main() {
    let p = Profile::toy();
    let params = BaseParams { sig: p.sig, u: p.u };
    for game in [GameId::Hybrid0, GameId::Hybrid1, GameId::Hybrid2] {
        let advs: [Box<dyn HybridAdversary>; 3] =
            [Box::new(HonestHybrid), Box::new(MeasureAndCopy::default()), Box::new(SecretHolder::default())];
        for mut adv in advs {
            let s = run_hybrid(params, &GameSpec::new(game, 3, 200, 21), adv.as_mut()).unwrap().summary;
            println!("{game:<8} {:<17} win rate {:.3}", s.adversary, s.wins.rate);
        }
    }
}
