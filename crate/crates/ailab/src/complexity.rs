//! Exhaustive fuel-bounded conditional complexity tables.
//!
//! A table fixes (condition, mode, max program length L, machine config) and
//! maps every producible output to the minimal program length. Absence from
//! the table is the first-class ABOVE_BOUND value, surfaced as `None`; it is
//! never conflated with a large number.
//!
//! The builder walks syntactically valid opcode sequences directly, threading
//! execution state through the search so a failing prefix prunes its whole
//! subtree. Dominated programs (anything after a HALT in plain mode, and
//! non-minimal operand encodings) are skipped; they can never improve a
//! minimum. The naive all-bitstrings enumerator in the test suite is the
//! oracle that keeps this path honest.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::Bits;
use crate::codes::pack_condition;
use crate::machine::{
    for_each_op_fitting, machine_fingerprint, ExecState, MachineConfig, Mode, Op,
};

/// Desk-scale guard on program length bounds.
pub const DEFAULT_BOUND_GUARD: u32 = 24;
/// Desk-scale guard on `n_x + n_y` for pair grids.
pub const PAIR_GRID_GUARD: usize = 14;

#[derive(Debug, Error)]
pub enum ComplexityError {
    #[error("bound too large: {0}")]
    BoundTooLarge(String),
    #[error("value above the table bound: {0}")]
    AboveBound(String),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cached table was built by a different machine")]
    FingerprintMismatch,
    #[error("corrupt cache file: {0}")]
    CorruptCache(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TableKey {
    pub condition: Bits,
    pub max_len: u32,
    pub cfg: MachineConfig,
    pub machine_fingerprint: String,
}

impl TableKey {
    pub fn new(condition: Bits, max_len: u32, cfg: MachineConfig) -> Self {
        TableKey { condition, max_len, cfg, machine_fingerprint: machine_fingerprint() }
    }

    fn canonical(&self) -> String {
        format!(
            "cond={};mode={};L={};fuel={};cap={};fp={}",
            fmt_bits(&self.condition),
            self.cfg.mode.as_str(),
            self.max_len,
            self.cfg.fuel,
            self.cfg.output_cap,
            self.machine_fingerprint
        )
    }

    /// Short content hash used as the cache file name.
    pub fn short_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical().as_bytes());
        format!("{:x}", hasher.finalize())[..16].to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityTable {
    pub key: TableKey,
    entries: HashMap<Bits, u32>,
    /// Largest execution cost over all recorded minimal-length halts; lets
    /// tests assert that fuel is never the binding constraint at desk scale.
    pub max_cost: u64,
}

impl ComplexityTable {
    pub fn lookup(&self, x: &Bits) -> Option<u32> {
        self.entries.get(x).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Bits, u32)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn outputs_with_value_at_most(&self, t: u32) -> usize {
        self.entries.values().filter(|&&v| v <= t).count()
    }

    /// The §-counting bound: fewer than `2^{t+1}` outputs at value ≤ t.
    pub fn satisfies_program_counting(&self) -> bool {
        let max = self.entries.values().copied().max().unwrap_or(0);
        (0..=max).all(|t| (self.outputs_with_value_at_most(t) as u128) < 1u128 << (t + 1))
    }
}

/// Builds the table for one condition by exhaustive pruned enumeration.
///
/// The result is independent of enumeration order and of the parallel
/// decomposition: workers produce local maps merged by min.
pub fn build_table(
    condition: &Bits,
    max_len: u32,
    cfg: &MachineConfig,
) -> Result<ComplexityTable, ComplexityError> {
    build_table_guarded(condition, max_len, cfg, DEFAULT_BOUND_GUARD)
}

pub fn build_table_guarded(
    condition: &Bits,
    max_len: u32,
    cfg: &MachineConfig,
    guard: u32,
) -> Result<ComplexityTable, ComplexityError> {
    if max_len > guard {
        return Err(ComplexityError::BoundTooLarge(format!(
            "max_len {max_len} exceeds the desk-scale guard {guard}"
        )));
    }
    let mut entries = HashMap::new();
    let mut max_cost = 0u64;
    let root = ExecState::new();
    if cfg.mode == Mode::Plain {
        record(&mut entries, &mut max_cost, 0, &root);
    }

    // one manual expansion level so rayon has branches to steal
    let mut branches: Vec<(ExecState, u32)> = Vec::new();
    expand(&root, 0, max_len, condition, cfg, &mut |state, len| {
        branches.push((state, len))
    }, &mut |len, state| {
        record(&mut entries, &mut max_cost, len, state);
    });

    let locals: Vec<(HashMap<Bits, u32>, u64)> = branches
        .into_par_iter()
        .map(|(state, len)| {
            let mut local = HashMap::new();
            let mut local_cost = 0u64;
            if cfg.mode == Mode::Plain {
                record(&mut local, &mut local_cost, len, &state);
            }
            dfs(&state, len, max_len, condition, cfg, &mut local, &mut local_cost);
            (local, local_cost)
        })
        .collect();

    for (local, local_cost) in locals {
        for (output, len) in local {
            entries
                .entry(output)
                .and_modify(|cur| *cur = (*cur).min(len))
                .or_insert(len);
        }
        max_cost = max_cost.max(local_cost);
    }

    Ok(ComplexityTable {
        key: TableKey::new(condition.clone(), max_len, *cfg),
        entries,
        max_cost,
    })
}

fn record(entries: &mut HashMap<Bits, u32>, max_cost: &mut u64, len: u32, state: &ExecState) {
    *max_cost = (*max_cost).max(state.cost);
    entries
        .entry(state.output.clone())
        .and_modify(|cur| *cur = (*cur).min(len))
        .or_insert(len);
}

fn dfs(
    state: &ExecState,
    len: u32,
    max_len: u32,
    condition: &Bits,
    cfg: &MachineConfig,
    entries: &mut HashMap<Bits, u32>,
    max_cost: &mut u64,
) {
    let mut recurse: Vec<(ExecState, u32)> = Vec::new();
    expand(state, len, max_len, condition, cfg, &mut |child, child_len| {
        recurse.push((child, child_len))
    }, &mut |halt_len, halt_state| {
        record(entries, max_cost, halt_len, halt_state);
    });
    for (child, child_len) in recurse {
        if cfg.mode == Mode::Plain {
            record(entries, max_cost, child_len, &child);
        }
        dfs(&child, child_len, max_len, condition, cfg, entries, max_cost);
    }
}

/// Expands one node: every opcode that fits the remaining budget and does not
/// fail. Children that can still grow go to `descend`; completed prefix-free
/// programs (HALT appended) go to `halted`. In plain mode every descended
/// child is itself a program; the caller records it.
fn expand(
    state: &ExecState,
    len: u32,
    max_len: u32,
    condition: &Bits,
    cfg: &MachineConfig,
    descend: &mut impl FnMut(ExecState, u32),
    halted: &mut impl FnMut(u32, &ExecState),
) {
    let budget = (max_len - len) as usize;
    for_each_op_fitting(budget, |op| {
        if op == Op::Halt {
            // plain: a HALT-terminated program repeats the output its prefix
            // already recorded at a shorter length
            if cfg.mode == Mode::PrefixFree {
                let mut child = state.clone();
                if child.step(&Op::Halt, condition, cfg).is_ok() {
                    halted(len + 4, &child);
                }
            }
            return;
        }
        if let Op::Lit(empty_payload) = &op {
            let k = empty_payload.len();
            let op_len = op.encoded_len() as u32;
            for value in 0..1u64 << k {
                let lit = Op::Lit(Bits::from_index(value, k));
                let mut child = state.clone();
                if child.step(&lit, condition, cfg).is_ok() {
                    descend(child, len + op_len);
                }
            }
            return;
        }
        let op_len = op.encoded_len() as u32;
        let mut child = state.clone();
        if child.step(&op, condition, cfg).is_ok() {
            descend(child, len + op_len);
        }
    });
}

fn fmt_bits(b: &Bits) -> String {
    format!("{}:{}", b.len(), b.to_hex())
}

fn parse_bits_field(s: &str) -> Option<Bits> {
    let (len, hex) = s.split_once(':')?;
    Bits::from_hex(len.parse().ok()?, hex)
}

/// Writes a table as versioned, self-describing structured text.
pub fn save_table(table: &ComplexityTable, path: &Path) -> Result<(), CacheError> {
    let mut out = String::new();
    out.push_str("ailab-table v1\n");
    out.push_str(&format!("fingerprint {}\n", table.key.machine_fingerprint));
    out.push_str(&format!("mode {}\n", table.key.cfg.mode.as_str()));
    out.push_str(&format!("max_len {}\n", table.key.max_len));
    out.push_str(&format!("fuel {}\n", table.key.cfg.fuel));
    out.push_str(&format!("output_cap {}\n", table.key.cfg.output_cap));
    out.push_str(&format!("condition {}\n", fmt_bits(&table.key.condition)));
    out.push_str(&format!("max_cost {}\n", table.max_cost));
    let mut entries: Vec<(&Bits, u32)> = table.iter().collect();
    entries.sort();
    out.push_str(&format!("entries {}\n", entries.len()));
    for (output, value) in entries {
        out.push_str(&format!("{} {}\n", fmt_bits(output), value));
    }
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

pub fn load_table(path: &Path) -> Result<ComplexityTable, CacheError> {
    let text = fs::read_to_string(path)?;
    let corrupt = |why: &str| CacheError::CorruptCache(format!("{}: {why}", path.display()));
    let mut lines = text.lines();
    if lines.next() != Some("ailab-table v1") {
        return Err(corrupt("bad header"));
    }
    let mut field = |name: &str| -> Result<String, CacheError> {
        let line = lines.next().ok_or_else(|| corrupt("truncated header"))?;
        line.strip_prefix(name)
            .and_then(|s| s.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| corrupt(&format!("expected field {name}")))
    };
    let fingerprint = field("fingerprint")?;
    if fingerprint != machine_fingerprint() {
        return Err(CacheError::FingerprintMismatch);
    }
    let mode = match field("mode")?.as_str() {
        "plain" => Mode::Plain,
        "prefix" => Mode::PrefixFree,
        _ => return Err(corrupt("bad mode")),
    };
    let max_len: u32 = field("max_len")?.parse().map_err(|_| corrupt("bad max_len"))?;
    let fuel: u64 = field("fuel")?.parse().map_err(|_| corrupt("bad fuel"))?;
    let output_cap: usize = field("output_cap")?.parse().map_err(|_| corrupt("bad output_cap"))?;
    let condition = parse_bits_field(&field("condition")?).ok_or_else(|| corrupt("bad condition"))?;
    let max_cost: u64 = field("max_cost")?.parse().map_err(|_| corrupt("bad max_cost"))?;
    let count: usize = field("entries")?.parse().map_err(|_| corrupt("bad entry count"))?;
    let mut entries = HashMap::with_capacity(count);
    for _ in 0..count {
        let line = lines.next().ok_or_else(|| corrupt("truncated entries"))?;
        let (bits_field, value) = line.split_once(' ').ok_or_else(|| corrupt("bad entry"))?;
        let output = parse_bits_field(bits_field).ok_or_else(|| corrupt("bad entry bits"))?;
        let value: u32 = value.parse().map_err(|_| corrupt("bad entry value"))?;
        entries.insert(output, value);
    }
    if lines.next().is_some() {
        return Err(corrupt("trailing data"));
    }
    let cfg = MachineConfig { mode, fuel, output_cap };
    Ok(ComplexityTable {
        key: TableKey { condition, max_len, cfg, machine_fingerprint: fingerprint },
        entries,
        max_cost,
    })
}

/// A grid of pair complexities `C(uv | n_x, n_y)` from one table build.
#[derive(Debug, Clone)]
pub struct PairGrid {
    pub n_x: usize,
    pub n_y: usize,
    pub mode: Mode,
    values: Vec<Option<u32>>,
}

impl PairGrid {
    pub fn value(&self, u: &Bits, v: &Bits) -> Option<u32> {
        debug_assert_eq!(u.len(), self.n_x);
        debug_assert_eq!(v.len(), self.n_y);
        self.values[((u.to_index() << self.n_y) | v.to_index()) as usize]
    }
}

/// The lab: one fixed (fuel, output cap, L) bounds tuple plus a table store.
///
/// Tables are memoized in memory and, when a cache directory is set, persisted
/// as one file per key named by the key's short hash.
pub struct Lab {
    pub max_len: u32,
    pub fuel: u64,
    pub output_cap: usize,
    pub guard: u32,
    cache_dir: Option<PathBuf>,
    tables: Mutex<HashMap<(Bits, Mode), Arc<ComplexityTable>>>,
}

impl Lab {
    pub fn new(max_len: u32) -> Self {
        Lab {
            max_len,
            fuel: 4096,
            output_cap: 64,
            guard: DEFAULT_BOUND_GUARD,
            cache_dir: None,
            tables: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn with_output_cap(mut self, cap: usize) -> Self {
        self.output_cap = cap;
        self
    }

    pub fn with_guard(mut self, guard: u32) -> Self {
        self.guard = guard;
        self
    }

    pub fn config(&self, mode: Mode) -> MachineConfig {
        MachineConfig { mode, fuel: self.fuel, output_cap: self.output_cap }
    }

    pub fn table(&self, condition: &Bits, mode: Mode) -> Result<Arc<ComplexityTable>, ComplexityError> {
        if let Some(t) = self.tables.lock().unwrap().get(&(condition.clone(), mode)) {
            return Ok(Arc::clone(t));
        }
        let cfg = self.config(mode);
        let key = TableKey::new(condition.clone(), self.max_len, cfg);
        let table = match self.cache_path(&key) {
            Some(path) if path.exists() => {
                let loaded = load_table(&path)?;
                if loaded.key != key {
                    return Err(CacheError::CorruptCache(format!(
                        "{}: key does not match its file name",
                        path.display()
                    ))
                    .into());
                }
                loaded
            }
            maybe_path => {
                let built = build_table_guarded(condition, self.max_len, &cfg, self.guard)?;
                if let Some(path) = maybe_path {
                    save_table(&built, &path)?;
                }
                built
            }
        };
        let table = Arc::new(table);
        self.tables
            .lock()
            .unwrap()
            .insert((condition.clone(), mode), Arc::clone(&table));
        Ok(table)
    }

    /// Every table this lab has built or loaded so far.
    pub fn cached_tables(&self) -> Vec<Arc<ComplexityTable>> {
        self.tables.lock().unwrap().values().cloned().collect()
    }

    fn cache_path(&self, key: &TableKey) -> Option<PathBuf> {
        self.cache_dir
            .as_ref()
            .map(|dir| dir.join(format!("{}.tbl", key.short_hash())))
    }

    /// `C`/`K` through the condition packing: `None` is ABOVE_BOUND.
    pub fn complexity_of(
        &self,
        x: &Bits,
        condition_items: &[Bits],
        mode: Mode,
    ) -> Result<Option<u32>, ComplexityError> {
        let condition = pack_condition(condition_items);
        Ok(self.table(&condition, mode)?.lookup(x))
    }

    /// Plain `C(x | items)`.
    pub fn c(&self, x: &Bits, condition_items: &[Bits]) -> Result<Option<u32>, ComplexityError> {
        self.complexity_of(x, condition_items, Mode::Plain)
    }

    /// Prefix-free `K(x | items)`.
    pub fn k(&self, x: &Bits, condition_items: &[Bits]) -> Result<Option<u32>, ComplexityError> {
        self.complexity_of(x, condition_items, Mode::PrefixFree)
    }

    /// `C²(x | n_x) = C(bin(C(x|n_x)) | n_x)`.
    pub fn second_order(&self, x: &Bits) -> Result<Option<u32>, ComplexityError> {
        let n_x = Bits::bin(x.len() as u64);
        let t_x = self.c(x, &[n_x.clone()])?.ok_or_else(|| {
            ComplexityError::AboveBound(format!("C({x} | n_x) exceeds the table bound"))
        })?;
        self.c(&Bits::bin(t_x as u64), &[n_x])
    }

    /// One table build serving every cell `C(uv | n_x, n_y)`.
    pub fn pair_grid(&self, n_x: usize, n_y: usize, mode: Mode) -> Result<PairGrid, ComplexityError> {
        if n_x + n_y > PAIR_GRID_GUARD {
            return Err(ComplexityError::BoundTooLarge(format!(
                "n_x + n_y = {} exceeds the pair grid guard {PAIR_GRID_GUARD}",
                n_x + n_y
            )));
        }
        let condition = pack_condition(&[Bits::bin(n_x as u64), Bits::bin(n_y as u64)]);
        let table = self.table(&condition, mode)?;
        let mut values = Vec::with_capacity(1 << (n_x + n_y));
        for u in Bits::all_of_len(n_x) {
            for v in Bits::all_of_len(n_y) {
                values.push(table.lookup(&u.concat(&v)));
            }
        }
        Ok(PairGrid { n_x, n_y, mode, values })
    }

    /// The lambalgen pair table `K(uv | n)`, a single-item condition.
    pub fn pair_grid_single_condition(
        &self,
        n: usize,
        mode: Mode,
    ) -> Result<PairGrid, ComplexityError> {
        if 2 * n > PAIR_GRID_GUARD {
            return Err(ComplexityError::BoundTooLarge(format!(
                "2n = {} exceeds the pair grid guard {PAIR_GRID_GUARD}",
                2 * n
            )));
        }
        let condition = Bits::bin(n as u64);
        let table = self.table(&condition, mode)?;
        let mut values = Vec::with_capacity(1 << (2 * n));
        for u in Bits::all_of_len(n) {
            for v in Bits::all_of_len(n) {
                values.push(table.lookup(&u.concat(&v)));
            }
        }
        Ok(PairGrid { n_x: n, n_y: n, mode, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    fn plain_cfg() -> MachineConfig {
        MachineConfig::new(Mode::Plain)
    }

    #[test]
    fn empty_condition_l0() {
        let t = build_table(&Bits::new(), 0, &plain_cfg()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.lookup(&Bits::new()), Some(0));
    }

    #[test]
    fn prefix_free_l4_is_halt_only() {
        let t = build_table(&Bits::new(), 4, &MachineConfig::new(Mode::PrefixFree)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.lookup(&Bits::new()), Some(4));
    }

    #[test]
    fn copyall_witness_is_minimal() {
        let t = build_table(&bits("0101"), 6, &plain_cfg()).unwrap();
        assert_eq!(t.lookup(&bits("0101")), Some(3));
    }

    #[test]
    fn single_zero_costs_six() {
        let lab = Lab::new(8);
        assert_eq!(lab.c(&bits("0"), &[]).unwrap(), Some(6));
        // no ≤5-bit program outputs "0": check the bound table directly
        let t5 = build_table(&Bits::new(), 5, &plain_cfg()).unwrap();
        assert_eq!(t5.lookup(&bits("0")), None);
    }

    #[test]
    fn identity_condition_copy() {
        let lab = Lab::new(8);
        assert_eq!(lab.c(&bits("0110"), &[bits("0110")]).unwrap(), Some(3));
        assert_eq!(lab.c(&Bits::new(), &[]).unwrap(), Some(0));
    }

    #[test]
    fn bound_guard() {
        assert!(matches!(
            build_table(&Bits::new(), 25, &plain_cfg()),
            Err(ComplexityError::BoundTooLarge(_))
        ));
    }

    #[test]
    fn monotone_in_bound() {
        let cond = bits("011");
        let small = build_table(&cond, 8, &plain_cfg()).unwrap();
        let large = build_table(&cond, 12, &plain_cfg()).unwrap();
        for (output, value) in small.iter() {
            let improved = large.lookup(output).expect("outputs never disappear");
            assert!(improved <= value);
        }
    }

    #[test]
    fn program_counting_bound() {
        for cond in ["", "1", "0101"] {
            let t = build_table(&bits(cond), 12, &plain_cfg()).unwrap();
            assert!(t.satisfies_program_counting());
        }
    }

    #[test]
    fn fuel_is_not_binding_at_desk_scale() {
        let t = build_table(&bits("0101"), 14, &plain_cfg()).unwrap();
        assert!(t.max_cost <= 64 + 14);
        assert!(t.max_cost < 4096);
    }

    #[test]
    fn parallel_determinism() {
        let cond = bits("0110");
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| build_table(&cond, 12, &plain_cfg()).unwrap());
        let parallel = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| build_table(&cond, 12, &plain_cfg()).unwrap());
        assert_eq!(serial, parallel);
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let t = build_table(&bits("01"), 10, &plain_cfg()).unwrap();
        let path = dir.path().join(format!("{}.tbl", t.key.short_hash()));
        save_table(&t, &path).unwrap();
        let loaded = load_table(&path).unwrap();
        assert_eq!(t, loaded);
    }

    #[test]
    fn load_rejects_altered_fingerprint() {
        let dir = tempfile::tempdir().unwrap();
        let t = build_table(&bits("01"), 8, &plain_cfg()).unwrap();
        let path = dir.path().join("t.tbl");
        save_table(&t, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let tampered = text.replacen(&t.key.machine_fingerprint[..8], "deadbeef", 1);
        fs::write(&path, tampered).unwrap();
        assert!(matches!(load_table(&path), Err(CacheError::FingerprintMismatch)));
    }

    #[test]
    fn load_rejects_truncation() {
        let dir = tempfile::tempdir().unwrap();
        let t = build_table(&bits("01"), 8, &plain_cfg()).unwrap();
        let path = dir.path().join("t.tbl");
        save_table(&t, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert!(matches!(load_table(&path), Err(CacheError::CorruptCache(_))));
    }

    #[test]
    fn lab_uses_disk_cache() {
        let dir = tempfile::tempdir().unwrap();
        let lab = Lab::new(10).with_cache_dir(dir.path());
        let first = lab.table(&bits("01"), Mode::Plain).unwrap();
        // a fresh lab over the same directory loads rather than rebuilds
        let lab2 = Lab::new(10).with_cache_dir(dir.path());
        let second = lab2.table(&bits("01"), Mode::Plain).unwrap();
        assert_eq!(*first, *second);
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn pair_grid_matches_direct_lookups() {
        let lab = Lab::new(12);
        let grid = lab.pair_grid(1, 1, Mode::Plain).unwrap();
        for u in Bits::all_of_len(1) {
            for v in Bits::all_of_len(1) {
                let direct = lab
                    .complexity_of(&u.concat(&v), &[Bits::bin(1), Bits::bin(1)], Mode::Plain)
                    .unwrap();
                assert_eq!(grid.value(&u, &v), direct);
            }
        }
    }

    #[test]
    fn pair_grid_guard() {
        let lab = Lab::new(12);
        assert!(matches!(
            lab.pair_grid(8, 8, Mode::Plain),
            Err(ComplexityError::BoundTooLarge(_))
        ));
    }

    #[test]
    fn all_cells_above_bound_at_l1() {
        let lab = Lab::new(1);
        let grid = lab.pair_grid(1, 1, Mode::Plain).unwrap();
        for u in Bits::all_of_len(1) {
            for v in Bits::all_of_len(1) {
                assert_eq!(grid.value(&u, &v), None);
            }
        }
    }

    #[test]
    fn second_order_depends_only_on_t_and_n() {
        let lab = Lab::new(16);
        let mut by_t: HashMap<u32, u32> = HashMap::new();
        for x in Bits::all_of_len(4) {
            let t_x = lab.c(&x, &[Bits::bin(4)]).unwrap().unwrap();
            let c2 = lab.second_order(&x).unwrap().unwrap();
            if let Some(&prev) = by_t.get(&t_x) {
                assert_eq!(prev, c2);
            }
            by_t.insert(t_x, c2);
        }
    }
}
