//! Information terms, cell grids, the two-part index code, and the
//! symmetry-of-information verifiers.
//!
//! Everything here is relative to one `Lab` bounds tuple. The grid for a pair
//! `(x, y)` marks cell `(u, v)` iff `C(uv | n_x, n_y) ≤ t` with
//! `t = C(xy | n_x, n_y)`; fat rows carry more than `2^{m-1}` one-cells
//! (strictly more, the Section-3 rule; the non-strict variant is counted for
//! comparison in the reports). Canonical enumeration order is lexicographic
//! throughout, which makes the encoder and decoder reproducible.

use thiserror::Error;

use crate::bits::Bits;
use crate::codes::{decode_lambda, encode_lambda, CodeError, LambdaRecord};
use crate::complexity::{ComplexityError, Lab, PairGrid};
use crate::machine::Mode;

#[derive(Debug, Error)]
pub enum SoiError {
    #[error("profile is partial; above bound: {0:?}")]
    PartialProfile(Vec<&'static str>),
    #[error("pair threshold t is above the table bound")]
    ThresholdUnavailable,
    #[error("deficiency w must be positive, got {0}")]
    DeficiencyNotPositive(i64),
    #[error("counting bound violated while indexing: {0}")]
    IndexOverflow(String),
    #[error("malformed two-part code: {0}")]
    MalformedInput(String),
    #[error("enumeration rank out of range")]
    RankOutOfRange,
    #[error("no witness: every profile was partial")]
    NoWitness,
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
}

/// All the information terms of one string pair under fixed bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InfoProfile {
    /// `C(x | n_x)`
    pub t_x: u32,
    /// `C(y | x, n_y)`
    pub t_y: u32,
    /// `C(xy | n_x, n_y)`
    pub t: u32,
    /// deficiency `t_x + t_y - t`
    pub w: i64,
    /// `I(x : y) = C(y | n_y) - C(y | x, n_y)`
    pub i_xy: i64,
    /// `I(y : x) = C(x | n_x) - C(x | y, n_x)`
    pub i_yx: i64,
    /// `C²(x | n_x) + C²(y | n_y)`
    pub delta: u32,
}

pub fn info_profile(lab: &Lab, x: &Bits, y: &Bits) -> Result<InfoProfile, SoiError> {
    let n_x = Bits::bin(x.len() as u64);
    let n_y = Bits::bin(y.len() as u64);
    let mut missing = Vec::new();
    let mut get = |name: &'static str, v: Result<Option<u32>, ComplexityError>| -> Result<u32, SoiError> {
        match v? {
            Some(v) => Ok(v),
            None => {
                missing.push(name);
                Ok(0)
            }
        }
    };
    let t_x = get("C(x|n_x)", lab.c(x, &[n_x.clone()]))?;
    let c_y = get("C(y|n_y)", lab.c(y, &[n_y.clone()]))?;
    let t_y = get("C(y|x,n_y)", lab.c(y, &[x.clone(), n_y.clone()]))?;
    let t = get("C(xy|n_x,n_y)", lab.c(&x.concat(y), &[n_x.clone(), n_y]))?;
    let c_x_given_y = get("C(x|y,n_x)", lab.c(x, &[y.clone(), n_x]))?;
    let c2 = |s: &Bits, name: &'static str, missing: &mut Vec<&'static str>| -> Result<u32, SoiError> {
        match lab.second_order(s) {
            Ok(Some(v)) => Ok(v),
            Ok(None) | Err(ComplexityError::AboveBound(_)) => {
                missing.push(name);
                Ok(0)
            }
            Err(e) => Err(e.into()),
        }
    };
    let c2x = c2(x, "C2(x|n_x)", &mut missing)?;
    let c2y = c2(y, "C2(y|n_y)", &mut missing)?;
    if !missing.is_empty() {
        return Err(SoiError::PartialProfile(missing));
    }
    Ok(InfoProfile {
        t_x,
        t_y,
        t,
        w: t_x as i64 + t_y as i64 - t as i64,
        i_xy: c_y as i64 - t_y as i64,
        i_yx: t_x as i64 - c_x_given_y as i64,
        delta: c2x + c2y,
    })
}

/// `m` from the designated row's one-cell count: `2^{m-1} < s ≤ 2^m`.
pub fn m_of(s: u64) -> u32 {
    debug_assert!(s >= 1);
    64 - (s - 1).leading_zeros()
}

/// The boolean pair table at threshold `t`, with the fat-row structure for a
/// designated row.
#[derive(Debug, Clone)]
pub struct CellGrid {
    pub n_x: usize,
    pub n_y: usize,
    pub t: u32,
    /// designated row (the `x` of the pair the grid was built for)
    pub x_index: u64,
    cells: Vec<bool>,
    pub row_counts: Vec<u64>,
    /// total number of one-cells `|S|`
    pub s_total: u64,
    pub m: u32,
    /// fat rows in lexicographic order
    pub fat_rows: Vec<u64>,
}

impl CellGrid {
    pub fn cell(&self, u: u64, v: u64) -> bool {
        self.cells[((u << self.n_y) | v) as usize]
    }

    /// One-cells of row `u` in lexicographic column order.
    pub fn row_cells(&self, u: u64) -> Vec<u64> {
        (0..1u64 << self.n_y).filter(|&v| self.cell(u, v)).collect()
    }

    /// Strict fat threshold: more than `2^{m-1}` cells; `m = 0` means more
    /// than half a cell, i.e. at least one.
    pub fn fat_threshold(&self) -> u64 {
        if self.m == 0 {
            0
        } else {
            1u64 << (self.m - 1)
        }
    }

    /// Rows meeting the Section-1 variant "at least `2^{m-1}`" for the
    /// comparison entry in reports.
    pub fn fat_rows_nonstrict(&self) -> Vec<u64> {
        let thr = if self.m == 0 { 1 } else { 1u64 << (self.m - 1) };
        (0..1u64 << self.n_x)
            .filter(|&u| self.row_counts[u as usize] >= thr)
            .collect()
    }
}

fn grid_cells(grid: &PairGrid, t: u32) -> (Vec<bool>, Vec<u64>) {
    let rows = 1usize << grid.n_x;
    let cols = 1usize << grid.n_y;
    let mut cells = Vec::with_capacity(rows * cols);
    let mut row_counts = vec![0u64; rows];
    for u in Bits::all_of_len(grid.n_x) {
        let ui = u.to_index() as usize;
        for v in Bits::all_of_len(grid.n_y) {
            // ABOVE_BOUND cells are conservatively zero
            let one = matches!(grid.value(&u, &v), Some(c) if c <= t);
            cells.push(one);
            if one {
                row_counts[ui] += 1;
            }
        }
    }
    (cells, row_counts)
}

pub fn build_cell_grid(lab: &Lab, x: &Bits, y: &Bits) -> Result<CellGrid, SoiError> {
    let pair_grid = lab.pair_grid(x.len(), y.len(), Mode::Plain)?;
    let t = pair_grid.value(x, y).ok_or(SoiError::ThresholdUnavailable)?;
    Ok(cell_grid_at(&pair_grid, t, x.to_index()))
}

/// Grid structure at an explicit threshold; the decoder re-runs this from the
/// header alone.
pub fn cell_grid_at(pair_grid: &PairGrid, t: u32, x_index: u64) -> CellGrid {
    let (cells, row_counts) = grid_cells(pair_grid, t);
    let s_total: u64 = row_counts.iter().sum();
    let s_x = row_counts[x_index as usize];
    debug_assert!(s_x >= 1, "the designated pair itself is a one-cell");
    let m = m_of(s_x);
    let thr = if m == 0 { 0 } else { 1u64 << (m - 1) };
    let fat_rows = (0..1u64 << pair_grid.n_x)
        .filter(|&u| row_counts[u as usize] > thr)
        .collect();
    CellGrid {
        n_x: pair_grid.n_x,
        n_y: pair_grid.n_y,
        t,
        x_index,
        cells,
        row_counts,
        s_total,
        m,
        fat_rows,
    }
}

/// The two-part code: self-delimiting header Λ, the fat-row index on exactly
/// `t − m + 2` bits, and the in-row index on exactly `m` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlCode {
    pub lambda: Bits,
    pub f_index: Bits,
    pub s_index: Bits,
}

impl KlCode {
    pub fn concat(&self) -> Bits {
        self.lambda.concat(&self.f_index).concat(&self.s_index)
    }

    /// `λ + (t−m+2) + m = λ + t + 2`.
    pub fn total_len(&self) -> usize {
        self.lambda.len() + self.f_index.len() + self.s_index.len()
    }
}

fn padded_rank(rank: u64, width: u32, what: &str) -> Result<Bits, SoiError> {
    if width < 64 && rank >= 1u64 << width {
        return Err(SoiError::IndexOverflow(format!(
            "{what} rank {rank} does not fit {width} bits"
        )));
    }
    Ok(Bits::from_index(rank, width as usize))
}

pub fn kl_encode(lab: &Lab, x: &Bits, y: &Bits) -> Result<KlCode, SoiError> {
    let profile = info_profile(lab, x, y)?;
    if profile.w <= 0 {
        return Err(SoiError::DeficiencyNotPositive(profile.w));
    }
    let grid = build_cell_grid(lab, x, y)?;
    let record = LambdaRecord {
        delta_n: x.len().abs_diff(y.len()) as u64,
        t_x: profile.t_x as u64,
        t_y: profile.t_y as u64,
        w: profile.w as u64,
        b: x.len() > y.len(),
    };
    let lambda = encode_lambda(&record);

    let f_rank = grid
        .fat_rows
        .iter()
        .position(|&u| u == grid.x_index)
        .expect("the designated row is always fat") as u64;
    let f_index = padded_rank(f_rank, grid.t - grid.m + 2, "fat row")?;

    let s_rank = grid
        .row_cells(grid.x_index)
        .iter()
        .position(|&v| v == y.to_index())
        .expect("the designated cell is a one-cell") as u64;
    let s_index = padded_rank(s_rank, grid.m, "in-row")?;

    Ok(KlCode { lambda, f_index, s_index })
}

/// Inverse of `kl_encode`. The decoder gets `n_x` as conditional information
/// and the three fields of the code, each delimited by its own length — the
/// same delimiting the §-proof gets for free, where each index is a complete
/// program on its own. It recovers `t = t_x + t_y − w` from Λ, then
/// `m = t + 2 − |f_index|` from the fat-row field's exact width, and re-runs
/// the canonical enumerations. A flat concatenation would not suffice: the
/// split point carries the value of `m`, and distinct pairs can share every
/// other header field.
pub fn kl_decode(lab: &Lab, code: &KlCode, n_x: usize) -> Result<(Bits, Bits), SoiError> {
    let (record, consumed) = decode_lambda(&code.lambda).map_err(|e: CodeError| {
        SoiError::MalformedInput(format!("bad Λ header: {e}"))
    })?;
    if consumed != code.lambda.len() {
        return Err(SoiError::MalformedInput("trailing bits in Λ field".into()));
    }
    let n_y = if record.b {
        n_x.checked_sub(record.delta_n as usize)
    } else {
        Some(n_x + record.delta_n as usize)
    }
    .ok_or_else(|| SoiError::MalformedInput("length gap exceeds n_x".into()))?;
    let t = record.t_x as i64 + record.t_y as i64 - record.w as i64;
    if t < 0 {
        return Err(SoiError::MalformedInput("negative threshold in header".into()));
    }
    let t = t as u32;
    let m = (t as i64 + 2).checked_sub(code.f_index.len() as i64).filter(|&m| m >= 0).ok_or_else(
        || SoiError::MalformedInput("fat-row index wider than t + 2".into()),
    )? as u32;
    if code.s_index.len() != m as usize {
        return Err(SoiError::MalformedInput(format!(
            "in-row index must be exactly m = {m} bits",
        )));
    }
    let pair_grid = lab.pair_grid(n_x, n_y, Mode::Plain)?;
    let (cells, row_counts) = grid_cells(&pair_grid, t);

    let thr = if m == 0 { 0 } else { 1u64 << (m - 1) };
    let fat: Vec<u64> = (0..1u64 << n_x)
        .filter(|&u| row_counts[u as usize] > thr)
        .collect();
    let f_rank = code.f_index.to_index();
    let Some(&x_index) = fat.get(f_rank as usize) else {
        return Err(SoiError::RankOutOfRange);
    };
    let x = Bits::from_index(x_index, n_x);

    let s_rank = code.s_index.to_index();
    let row: Vec<u64> = (0..1u64 << n_y)
        .filter(|&v| cells[((x_index << n_y) | v) as usize])
        .collect();
    let Some(&y_index) = row.get(s_rank as usize) else {
        return Err(SoiError::RankOutOfRange);
    };
    Ok((x, Bits::from_index(y_index, n_y)))
}

/// One pair's entry in a sweep report.
#[derive(Debug, Clone)]
pub struct PairTerm {
    pub x: Bits,
    pub y: Bits,
    pub profile: InfoProfile,
    /// the Main Theorem bound term
    /// `log₂(1+max(I(x:y),0)) + log₂(1+|n_x−n_y|) + δ(x,y)`
    pub g: f64,
}

pub fn bound_term(profile: &InfoProfile, n_x: usize, n_y: usize) -> f64 {
    let i = profile.i_xy.max(0) as f64;
    let gap = n_x.abs_diff(n_y) as f64;
    (1.0 + i).log2() + (1.0 + gap).log2() + profile.delta as f64
}

/// Exhaustive profile sweep over `{0,1}^{n_x} × {0,1}^{n_y}`.
#[derive(Debug, Clone)]
pub struct ProfileSweep {
    pub n_x: usize,
    pub n_y: usize,
    pub terms: Vec<PairTerm>,
    pub partial_pairs: usize,
}

pub fn profile_sweep(lab: &Lab, n_x: usize, n_y: usize) -> Result<ProfileSweep, SoiError> {
    let mut terms = Vec::new();
    let mut partial_pairs = 0usize;
    for x in Bits::all_of_len(n_x) {
        for y in Bits::all_of_len(n_y) {
            match info_profile(lab, &x, &y) {
                Ok(profile) => terms.push(PairTerm {
                    g: bound_term(&profile, n_x, n_y),
                    x: x.clone(),
                    y,
                    profile,
                }),
                Err(SoiError::PartialProfile(_)) => partial_pairs += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(ProfileSweep { n_x, n_y, terms, partial_pairs })
}

/// Counting-bound verification over every pair with a defined threshold.
#[derive(Debug, Clone)]
pub struct CountingBoundsResult {
    pub n: usize,
    pub pairs_checked: usize,
    pub pairs_skipped: usize,
    pub violations: Vec<String>,
    /// minimal strict slack `2^{t+1} − |S|` observed
    pub min_slack_s: i128,
    /// minimal strict slack `2^{t−m+2} − |F|` observed
    pub min_slack_f: i128,
    /// pairs where the strict and non-strict fat-row rules disagree
    pub fat_rule_disagreements: usize,
}

pub fn verify_counting_bounds(lab: &Lab, n: usize) -> Result<CountingBoundsResult, SoiError> {
    let pair_grid = lab.pair_grid(n, n, Mode::Plain)?;
    let mut result = CountingBoundsResult {
        n,
        pairs_checked: 0,
        pairs_skipped: 0,
        violations: Vec::new(),
        min_slack_s: i128::MAX,
        min_slack_f: i128::MAX,
        fat_rule_disagreements: 0,
    };
    for x in Bits::all_of_len(n) {
        for y in Bits::all_of_len(n) {
            let Some(t) = pair_grid.value(&x, &y) else {
                result.pairs_skipped += 1;
                continue;
            };
            let grid = cell_grid_at(&pair_grid, t, x.to_index());
            result.pairs_checked += 1;
            let s_bound = 1i128 << (t + 1);
            let f_bound = 1i128 << (grid.t - grid.m + 2);
            let slack_s = s_bound - grid.s_total as i128;
            let slack_f = f_bound - grid.fat_rows.len() as i128;
            result.min_slack_s = result.min_slack_s.min(slack_s);
            result.min_slack_f = result.min_slack_f.min(slack_f);
            if slack_s <= 0 {
                result
                    .violations
                    .push(format!("pair ({x},{y}): |S|={} >= 2^{}", grid.s_total, t + 1));
            }
            if slack_f <= 0 {
                result.violations.push(format!(
                    "pair ({x},{y}): |F|={} >= 2^{}",
                    grid.fat_rows.len(),
                    grid.t - grid.m + 2
                ));
            }
            if !grid.fat_rows.contains(&grid.x_index) {
                result
                    .violations
                    .push(format!("pair ({x},{y}): designated row not fat"));
            }
            if grid.fat_rows_nonstrict().len() != grid.fat_rows.len() {
                result.fat_rule_disagreements += 1;
            }
        }
    }
    Ok(result)
}

/// Measured constant for the chain-rule upper bound
/// `C(xy|n,n) ≤ C(y|n) + C(x|y,n) + 2C²(y|n) + O(1)`.
#[derive(Debug, Clone)]
pub struct ChainRuleResult {
    pub n: usize,
    /// max of `C(xy) − [C(y|n) + C(x|y,n) + 2C²(y|n)]`
    pub b_max: i64,
    pub argmax: Option<(Bits, Bits)>,
    pub pairs_skipped: usize,
}

pub fn verify_chain_rule_upper(lab: &Lab, n: usize) -> Result<ChainRuleResult, SoiError> {
    let n_bits = Bits::bin(n as u64);
    let pair_grid = lab.pair_grid(n, n, Mode::Plain)?;
    let mut result = ChainRuleResult { n, b_max: i64::MIN, argmax: None, pairs_skipped: 0 };
    for x in Bits::all_of_len(n) {
        for y in Bits::all_of_len(n) {
            let lookups = (
                pair_grid.value(&x, &y),
                lab.c(&y, &[n_bits.clone()])?,
                lab.c(&x, &[y.clone(), n_bits.clone()])?,
                lab.second_order(&y).unwrap_or(None),
            );
            let (Some(t), Some(c_y), Some(c_x_y), Some(c2y)) = lookups else {
                result.pairs_skipped += 1;
                continue;
            };
            let b = t as i64 - (c_y as i64 + c_x_y as i64 + 2 * c2y as i64);
            if b > result.b_max {
                result.b_max = b;
                result.argmax = Some((x.clone(), y.clone()));
            }
        }
    }
    Ok(result)
}

/// Proof-internal checks run by the Main Theorem verifier: exhaustive
/// two-part round trips and the exact code-length identity.
#[derive(Debug, Clone, Default)]
pub struct RoundTripChecks {
    pub encoded_pairs: usize,
    pub failures: Vec<String>,
}

pub fn kl_round_trip_sweep(lab: &Lab, n_x: usize, n_y: usize) -> Result<RoundTripChecks, SoiError> {
    let mut checks = RoundTripChecks::default();
    for x in Bits::all_of_len(n_x) {
        for y in Bits::all_of_len(n_y) {
            let code = match kl_encode(lab, &x, &y) {
                Ok(code) => code,
                Err(SoiError::PartialProfile(_))
                | Err(SoiError::DeficiencyNotPositive(_))
                | Err(SoiError::ThresholdUnavailable) => continue,
                Err(e) => return Err(e),
            };
            checks.encoded_pairs += 1;
            let profile = info_profile(lab, &x, &y)?;
            let expected_total = code.lambda.len() + profile.t as usize + 2;
            if code.total_len() != expected_total {
                checks.failures.push(format!(
                    "pair ({x},{y}): code length {} != λ+t+2 = {expected_total}",
                    code.total_len()
                ));
            }
            let grid = build_cell_grid(lab, &x, &y)?;
            if code.f_index.len() != (grid.t - grid.m + 2) as usize {
                checks
                    .failures
                    .push(format!("pair ({x},{y}): f_index is not exactly t−m+2 bits"));
            }
            match kl_decode(lab, &code, n_x) {
                Ok((dx, dy)) if dx == x && dy == y => {}
                Ok((dx, dy)) => checks
                    .failures
                    .push(format!("pair ({x},{y}): decoded to ({dx},{dy})")),
                Err(e) => checks
                    .failures
                    .push(format!("pair ({x},{y}): decode failed: {e}")),
            }
        }
    }
    Ok(checks)
}

/// Measured constant for `C(x|n_x) ≤ C(x|n_x,Λ) + O(λ)`: the header cost
/// that asymptotic accounting hides. Reported, never asserted.
pub fn measure_lambda_overhead(lab: &Lab, n_x: usize, n_y: usize) -> Result<(i64, f64), SoiError> {
    let n_x_bits = Bits::bin(n_x as u64);
    let mut max_diff = i64::MIN;
    let mut max_ratio = f64::MIN;
    let mut any = false;
    for x in Bits::all_of_len(n_x) {
        for y in Bits::all_of_len(n_y) {
            let code = match kl_encode(lab, &x, &y) {
                Ok(code) => code,
                Err(SoiError::PartialProfile(_))
                | Err(SoiError::DeficiencyNotPositive(_))
                | Err(SoiError::ThresholdUnavailable) => continue,
                Err(e) => return Err(e),
            };
            let t_x = lab.c(&x, &[n_x_bits.clone()])?.expect("profile was full");
            let with_lambda = lab.c(&x, &[n_x_bits.clone(), code.lambda.clone()])?;
            let Some(with_lambda) = with_lambda else { continue };
            any = true;
            let diff = t_x as i64 - with_lambda as i64;
            max_diff = max_diff.max(diff);
            max_ratio = max_ratio.max(diff as f64 / code.lambda.len() as f64);
        }
    }
    if !any {
        return Err(SoiError::NoWitness);
    }
    Ok((max_diff, max_ratio))
}

/// The asymmetry example: `x` is the binary encoding of `n_y`.
#[derive(Debug, Clone)]
pub struct AsymmetryWitness {
    pub x: Bits,
    pub y: Bits,
    pub profile: InfoProfile,
    /// `I(y:x) − I(x:y)` of the winning pair
    pub gap: i64,
}

pub fn find_asymmetry_witness(lab: &Lab, n_y: usize) -> Result<AsymmetryWitness, SoiError> {
    let x = Bits::bin(n_y as u64);
    let mut best: Option<AsymmetryWitness> = None;
    for y in Bits::all_of_len(n_y) {
        let profile = match info_profile(lab, &x, &y) {
            Ok(p) => p,
            Err(SoiError::PartialProfile(_)) => continue,
            Err(e) => return Err(e),
        };
        let gap = profile.i_yx - profile.i_xy;
        // strict improvement keeps the lexicographically first maximizer
        if best.as_ref().map_or(true, |b| gap > b.gap) {
            best = Some(AsymmetryWitness { x: x.clone(), y, profile, gap });
        }
    }
    best.ok_or(SoiError::NoWitness)
}
