//! A short IND-pkT-CPA run, streamed as JSON lines.

use qpke::base::{BaseParams, BaseScheme};
use qpke::games::{run_game, GameId, GameSpec, PhaseTamper};
use qpke::Profile;

fn main() {
    let p = Profile::toy();
    let scheme = BaseScheme::new(BaseParams { sig: p.sig, u: p.u }, 2);
    let report = run_game(&scheme, &GameSpec::new(GameId::Cpa, 2, 3, 42), &mut PhaseTamper).unwrap();
    report.write_jsonl(std::io::stdout().lock()).unwrap();
}
