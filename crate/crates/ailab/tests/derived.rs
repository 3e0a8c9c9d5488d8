//! Frozen measurements. Each value in here was produced by this code base,
//! cross-checked against the naive enumerator (see tests/oracle.rs), and then
//! committed as a fixture. A diff means machine semantics changed.

use ailab::bits::{bits, Bits};
use ailab::complexity::Lab;
use ailab::lambalgen::{deficiency_sets, plain_random_strings};
use ailab::soi::{find_asymmetry_witness, profile_sweep, verify_chain_rule_upper};
use ailab::verify::{profile_csv, MAIN_THEOREM_FLOOR_B, MAIN_THEOREM_SLOPE};

#[test]
fn profile_4x4_matches_fixture_at_len_18() {
    // at length 18 only 24 of the 256 pairs have every term defined; the
    // fixture freezes exactly that truncation
    let lab = Lab::new(18);
    let sweep = profile_sweep(&lab, 4, 4).unwrap();
    assert_eq!(sweep.terms.len(), 24);
    assert_eq!(sweep.partial_pairs, 232);
    let csv = profile_csv(&sweep.terms, MAIN_THEOREM_SLOPE, MAIN_THEOREM_FLOOR_B);
    assert_eq!(csv, include_str!("fixtures/profile_4x4_L18.csv"));
}

#[test]
fn profile_4x4_matches_fixture_at_len_20() {
    let lab = Lab::new(20);
    let sweep = profile_sweep(&lab, 4, 4).unwrap();
    assert_eq!(sweep.terms.len(), 256);
    assert_eq!(sweep.partial_pairs, 0);
    let csv = profile_csv(&sweep.terms, MAIN_THEOREM_SLOPE, MAIN_THEOREM_FLOOR_B);
    assert_eq!(csv, include_str!("fixtures/profile_4x4_L20.csv"));
}

#[test]
fn chain_rule_slack_at_n3() {
    // max over all 64 pairs of C(xy) − [C(y|n) + C(x|y,n) + 2C²(y|n)]
    let lab = Lab::new(16);
    let result = verify_chain_rule_upper(&lab, 3).unwrap();
    assert_eq!(result.pairs_skipped, 0);
    assert_eq!(result.b_max, -29, "argmax {:?}", result.argmax);
}

#[test]
fn deficiency_sets_are_empty_at_desk_scale() {
    // every K(uv|n) at n=3 lands well above 2n − d for d ≥ 0, so both the
    // per-row sets and the fat-row set are empty — freeze that
    let lab = Lab::new(20);
    let sets = deficiency_sets(&lab, 3, 2).unwrap();
    assert!(sets.f.is_empty(), "F(2) = {:?}", sets.f);
    assert!(sets.a.values().all(|members| members.is_empty()));
}

#[test]
fn every_4_bit_string_is_2_random() {
    // a LIT witness alone costs 4 + 4 + 6 = 14 > n − c = 2, and nothing at
    // n=4 compresses below that margin
    let lab = Lab::new(20);
    let random = plain_random_strings(&lab, 4, 2).unwrap();
    let all: Vec<Bits> = Bits::all_of_len(4).collect();
    assert_eq!(random, all);
}

#[test]
fn asymmetry_witness_at_ny_6() {
    let lab = Lab::new(22);
    let w = find_asymmetry_witness(&lab, 6).unwrap();
    assert_eq!(w.x, bits("110"));
    assert_eq!(w.y, bits("110110"));
    assert_eq!(w.profile.i_xy, -8);
    assert_eq!(w.profile.i_yx, -2);
    assert_eq!(w.gap, 6);
}
