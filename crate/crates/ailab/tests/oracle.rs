//! The pruned table builder against the naive all-bitstrings enumerator.
//!
//! The naive enumerator runs every bit string up to the length bound through
//! the interpreter and keeps minima. It is too slow for the real sweeps but
//! small enough to be obviously correct, which makes it the oracle for the
//! pruned builder across every condition of length ≤ 6 in both modes.

use std::collections::HashMap;

use rayon::prelude::*;

use ailab::bits::Bits;
use ailab::complexity::build_table;
use ailab::machine::{execute, ExecOutcome, MachineConfig, Mode};

fn naive_table(condition: &Bits, max_len: u32, cfg: &MachineConfig) -> HashMap<Bits, u32> {
    let mut entries: HashMap<Bits, u32> = HashMap::new();
    for len in 0..=max_len {
        for v in 0..1u64 << len {
            let p = Bits::from_index(v, len as usize);
            if let ExecOutcome::Halted(output) = execute(&p, condition, cfg) {
                entries.entry(output).or_insert(len); // first hit is minimal
            }
        }
    }
    entries
}

fn sorted(map: impl IntoIterator<Item = (Bits, u32)>) -> Vec<(Bits, u32)> {
    let mut v: Vec<_> = map.into_iter().collect();
    v.sort();
    v
}

#[test]
fn pruned_builder_matches_naive_enumeration() {
    let max_len = 12;
    let conditions: Vec<Bits> = (0..=6usize)
        .flat_map(|len| Bits::all_of_len(len).collect::<Vec<_>>())
        .collect();
    assert_eq!(conditions.len(), 127);

    let mismatches: Vec<String> = conditions
        .par_iter()
        .flat_map(|condition| {
            [Mode::Plain, Mode::PrefixFree]
                .into_par_iter()
                .filter_map(|mode| {
                    let cfg = MachineConfig::new(mode);
                    let pruned = build_table(condition, max_len, &cfg).unwrap();
                    let naive = naive_table(condition, max_len, &cfg);
                    let pruned = sorted(pruned.iter().map(|(b, v)| (b.clone(), v)));
                    let naive = sorted(naive);
                    (pruned != naive).then(|| {
                        format!("condition {condition} mode {}", mode.as_str())
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    assert!(mismatches.is_empty(), "tables differ from oracle: {mismatches:?}");
}

#[test]
fn naive_enumeration_is_prefix_monotone_in_plain_mode() {
    // a plain program's every opcode-complete prefix is itself a program;
    // spot-check that extending never removes outputs from the naive table
    let cfg = MachineConfig::new(Mode::Plain);
    let cond = Bits::bin(5);
    let small = naive_table(&cond, 8, &cfg);
    let large = naive_table(&cond, 10, &cfg);
    for (output, len) in &small {
        assert!(large[output] <= *len);
    }
}
