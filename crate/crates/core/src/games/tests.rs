use qsim::{BitString, DetRng, Measurement, SparseState};

use super::hybrid::{run_hybrid, HonestHybrid, MeasureAndCopy, SecretHolder};
use super::strawman::NoSigStrawman;
use super::*;
use crate::base::{BaseParams, BaseScheme, REG_A, REG_B};
use crate::detect::DetectWrap;
use crate::primitives::{SigParams, SkeMode};
use crate::transforms::{cca_stack, Cva};
use crate::Profile;

fn params() -> BaseParams {
    BaseParams {
        sig: SigParams::new(16, 2).unwrap(),
        u: 16,
    }
}

fn base(ell: usize) -> BaseScheme {
    BaseScheme::new(params(), ell)
}

#[test]
fn game_ids_parse() {
    for g in GameId::ALL {
        assert_eq!(g.as_str().parse::<GameId>().unwrap(), g);
    }
    assert_eq!("ind-pkt-cpa".parse::<GameId>().unwrap(), GameId::Cpa);
    assert!("nope".parse::<GameId>().is_err());
    assert_eq!(serde_json::to_string(&GameId::OneCca).unwrap(), "\"1cca\"");
}

#[test]
fn honest_forwarder_is_a_coin_flip() {
    let spec = GameSpec::new(GameId::Cpa, 2, 2000, 11);
    let rep = run_game(&base(1), &spec, &mut HonestForwarder).unwrap();
    let w = rep.summary.wins;
    assert!(w.low < 0.5 && 0.5 < w.high, "{w:?}");
    assert_eq!(rep.summary.bottoms, 0);
}

#[test]
fn key_swap_is_rejected_but_breaks_the_strawman() {
    let spec = GameSpec::new(GameId::Cpa, 1, 300, 12);
    let rep = run_game(&base(2), &spec, &mut KeySwap::new()).unwrap();
    assert_eq!(rep.summary.bottoms, 300);
    let straw = run_game(&NoSigStrawman::new(params(), 2), &spec, &mut KeySwap::new()).unwrap();
    assert_eq!(straw.summary.wins.successes, 300);
}

#[test]
fn known_branch_breaks_only_the_strawman() {
    let spec = GameSpec::new(GameId::Cpa, 1, 300, 13);
    let straw = run_game(&NoSigStrawman::new(params(), 3), &spec, &mut KnownBranch::new()).unwrap();
    assert_eq!(straw.summary.wins.successes, 300);
    let real = run_game(&base(3), &spec, &mut KnownBranch::new()).unwrap();
    assert_eq!(real.summary.bottoms, 300);
}

#[test]
fn steps_follow_the_game_box() {
    let rep = run_game(&base(1), &GameSpec::new(GameId::Cpa, 1, 2, 1), &mut HonestForwarder).unwrap();
    assert_eq!(rep.trials[0].steps, ["skgen", "pkgen", "tamper", "choose", "enc", "guess"]);
    let rep = run_game(&base(1), &GameSpec::new(GameId::Cva, 1, 2, 1), &mut HonestForwarder).unwrap();
    assert_eq!(rep.trials[0].steps, ["skgen", "pkgen", "tamper", "choose", "enc", "cv", "guess"]);
    assert_eq!(rep.trials[0].cv, Some(true));
    let h = run_hybrid(params(), &GameSpec::new(GameId::Hybrid0, 1, 1, 1), &mut HonestHybrid).unwrap();
    assert_eq!(h.trials[0].steps, ["gen", "pkgen", "tamper", "check", "phase", "hadamard", "guess"]);
}

#[test]
fn reports_are_deterministic() {
    let spec = GameSpec::new(GameId::Cpa, 2, 50, 99);
    let run = || {
        let mut out = Vec::new();
        run_game(&base(2), &spec, &mut KeySwap::new()).unwrap().write_jsonl(&mut out).unwrap();
        out
    };
    let a = run();
    assert_eq!(a, run());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 51);
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["kind"], "summary");
    assert_eq!(last["bottoms"], 50);
}

/// Queries decryption once before and once after the challenge.
struct TwoQueries;

impl Adversary<BaseScheme> for TwoQueries {
    fn name(&self) -> String {
        "two-queries".into()
    }
    fn tamper(
        &mut self,
        s: &BaseScheme,
        vk: &<BaseScheme as Qpke>::VerKey,
        copies: Vec<<BaseScheme as Qpke>::PublicKey>,
        o: &mut Oracles<'_, BaseScheme>,
        rng: &mut DetRng,
    ) -> crate::Result<Tampered<<BaseScheme as Qpke>::PublicKey>> {
        let mut it = copies.into_iter();
        let spare = it.next().unwrap();
        let ct = s.enc(vk, spare, &BitString::ones(1), rng)?;
        assert_eq!(o.decrypt(&ct)?, Some(BitString::ones(1)));
        Ok(Tampered::new(it.next().unwrap(), "copy 1"))
    }
    fn guess(&mut self, _: &BaseScheme, ct: &<BaseScheme as Qpke>::Ciphertext, _: Option<bool>, o: &mut Oracles<'_, BaseScheme>, _: &mut DetRng) -> crate::Result<bool> {
        // the challenge itself is refused
        assert_eq!(o.decrypt(ct)?, None);
        Ok(false)
    }
}

#[test]
fn oracle_hygiene_and_budgets() {
    let cca = run_game(&base(1), &GameSpec::new(GameId::Cca, 2, 20, 3), &mut TwoQueries).unwrap();
    assert_eq!(cca.summary.aborted, 0);
    assert!(cca.trials.iter().all(|t| t.queries.len() == 2 && t.queries[1].refused && t.queries[1].phase == 2));
    let one = run_game(&base(1), &GameSpec::new(GameId::OneCca, 2, 20, 3), &mut TwoQueries).unwrap();
    assert_eq!(one.summary.aborted, 20);
    assert_eq!(one.summary.wins.successes, 0);
    let cpa = run_game(&base(1), &GameSpec::new(GameId::Cpa, 2, 5, 3), &mut TwoQueries).unwrap();
    assert_eq!(cpa.summary.aborted, 5);
}

#[test]
fn oracle_matches_direct_decryption() {
    let s = base(3);
    let mut rng = DetRng::from_seed(8);
    let (sk, vk) = s.skgen(&mut rng);
    let mut o = Oracles::new(Some(DecOracle::new(&s, &sk, None)));
    for i in 0..20u64 {
        let m = BitString::from_index(i % 8, 3);
        let ct = s.enc(&vk, s.pkgen(&sk, &mut rng), &m, &mut rng).unwrap();
        let mut bad = ct.clone();
        if let crate::base::BaseCiphertext::Present { d, .. } = &mut bad[0] {
            d.flip(0);
        }
        for c in [&ct, &bad] {
            assert_eq!(o.decrypt(c).unwrap(), s.dec(&sk, c));
        }
    }
}

#[test]
fn hybrids() {
    let spec = GameSpec::new(GameId::Hybrid2, 1, 200, 4);
    let honest = run_hybrid(params(), &spec, &mut HonestHybrid).unwrap();
    assert_eq!(honest.summary.wins.successes, 0);
    let ceiling = run_hybrid(params(), &spec, &mut SecretHolder::default()).unwrap();
    assert_eq!(ceiling.summary.wins.successes, 200);
    let spec4 = GameSpec::new(GameId::Hybrid2, 4, 200, 5);
    let copy = run_hybrid(params(), &spec4, &mut MeasureAndCopy::default()).unwrap();
    // distinct r with overwhelming probability at u = 16: forging is required
    assert!(copy.summary.wins.rate <= 0.01);
    let h1 = run_hybrid(params(), &GameSpec::new(GameId::Hybrid1, 1, 1000, 6), &mut HonestHybrid).unwrap();
    assert!(h1.summary.wins.low < 0.5 && 0.5 < h1.summary.wins.high);
}

#[test]
fn adversary_register_does_not_move_ciphertext_distribution() {
    use qsim::{Complex64, DMatrix, RegisterLayout};
    // (|0,x₀⟩|0⟩_C + |1,x₁⟩|1⟩_C + |1,g⟩|0⟩_C)/√3 with a garbage branch g
    let layout = RegisterLayout::new(&[(REG_A, 1), (REG_B, 4), ("C", 1)]).unwrap();
    let amp = Complex64::new(1.0, 0.0);
    let terms = ["001100", "110111", "101110"].map(|s| (qsim::bits(s), amp));
    let joint = SparseState::superpose(layout, terms).unwrap();
    let valid = |x: &BitString| BitString::from_bits([*x != qsim::bits("10111")]);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let u = DMatrix::from_row_slice(2, 2, &[Complex64::new(h, 0.0), Complex64::new(0.0, h), Complex64::new(0.0, h), Complex64::new(h, 0.0)]);
    // the challenger's side: coherent check into D, postselect ⊤, Z, Hadamard on (A, B)
    let dist = |st: SparseState| {
        let checked = st.add_register("D", 1).unwrap().coherent_eval(&[REG_A, REG_B], "D", valid).unwrap();
        let (p, post) = checked.postselect("D", &BitString::ones(1)).unwrap();
        let (_, post) = post.drop_register("D").unwrap();
        let d = post.apply_z_power(REG_A, true).unwrap().exact_distribution(Measurement::Hadamard, &[REG_A, REG_B]).unwrap();
        (p, d)
    };
    let (p_before, before) = dist(joint.apply_register_unitary("C", &u).unwrap());
    let (p_after, after) = dist(joint);
    assert!((p_before - p_after).abs() < 1e-12);
    assert!(before.max_abs_diff(&after) < 1e-12);
}

#[test]
fn detectability() {
    use detectability::{run_detectability_game, strong_detectability_cva};
    let s = base(4);
    let plain = run_detectability_game(&s, &mut PhaseTamper, 1, 100, 1).unwrap();
    assert_eq!(plain.violations, 100);
    let garbage = run_detectability_game(&s, &mut GarbageBranch { slots: 1 }, 1, 200, 2).unwrap();
    assert!(garbage.violations > 0);
    let wrapped = DetectWrap::new(BaseScheme::new(params(), 4 + 512), SigParams::new(16, 0).unwrap()).unwrap();
    for adv in [&mut PhaseTamper as &mut dyn Adversary<_>, &mut GarbageBranch { slots: 1 }, &mut GarbageBranch { slots: 40 }] {
        let r = run_detectability_game(&wrapped, adv, 1, 40, 3).unwrap();
        assert_eq!(r.violations, 0);
    }
    let cva = Cva::new(BaseScheme::new(BaseParams { sig: SigParams::new(8, 1).unwrap(), u: 8 }, 2), 2);
    let strong = strong_detectability_cva(&cva, 100, 4).unwrap();
    assert_eq!(strong.violations, 0);
    assert!(strong.bottoms > 0);
}

#[test]
fn replay_is_refused_by_binding() {
    let mut p = Profile::toy();
    p.sig = SigParams::new(8, 1).unwrap();
    p.lambda_r = 1;
    p.binding = SigParams::new(16, 0).unwrap();
    p.tmac = crate::primitives::TmacParams::new(8, 16).unwrap();
    let cca = cca_stack(&p, 1);
    let rep = run_game(&cca, &GameSpec::new(GameId::Cca, 2, 3, 5), &mut Replay::new()).unwrap();
    assert_eq!(rep.summary.aborted, 0);
    assert_eq!(rep.summary.queries, 3);
    assert_eq!(rep.summary.oracle_bottoms, 3);
}

#[test]
fn recyclable_games_run() {
    let rec = Recyclable::new(base(16), SkeMode::Cpa, 8);
    for g in [GameId::RecyclableQpk, GameId::RecyclableRk] {
        let rep = run_recyclable_game(&rec, &GameSpec::new(g, 1, 20, 6), &mut HonestForwarder).unwrap();
        assert_eq!(rep.summary.aborted, 0);
        assert_eq!(rep.summary.bottoms, 0);
    }
    let swapped = run_recyclable_game(&rec, &GameSpec::new(GameId::RecyclableQpk, 1, 20, 7), &mut KeySwap::new()).unwrap();
    assert_eq!(swapped.summary.bottoms, 20);
}
