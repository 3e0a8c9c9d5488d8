//! The fixed reference machine.
//!
//! Programs are bit strings read MSB-first. The opcode prefix code is
//! normative and bit-exact:
//!
//! ```text
//! 00    LIT k     SD(k) operand, then k raw payload bits appended to output
//! 01    ZEROS k   SD(k) operand, appends 0^k
//! 100   COPY k    SD(k) operand, copies k condition bits from the cursor
//! 101   COPYALL   copies condition bits from the cursor to the end
//! 1100  REWIND    cursor := 0
//! 1101  DUP       output := output·output (no-op on empty output)
//! 1110  HALT      stop
//! 11110 SKIP k    SD(k) operand, advances the cursor without output
//! 11111 FLIP k    SD(k) operand, copies k condition bits negated
//! ```
//!
//! Execution cost is opcodes executed plus output bits appended; `fuel`
//! bounds the cost and `output_cap` bounds the output length. In plain mode a
//! program also halts at exhaustion; in prefix-free mode parsing succeeds only
//! if the first HALT ends exactly at the last program bit, which makes the set
//! of valid programs prefix-free by construction.
//!
//! Worked trace: `p = 1011110`, condition `11`, prefix-free mode. `101`
//! (COPYALL) copies `11`, `1110` (HALT) consumes the final bits, so the
//! machine halts with output `11` at cost 1 + 2 + 1 = 4.

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::Bits;
use crate::codes::{sd_decode, sd_encode, sd_len, CodeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Plain,
    PrefixFree,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Plain => "plain",
            Mode::PrefixFree => "prefix",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MachineConfig {
    pub mode: Mode,
    /// Execution cost budget: opcodes executed + output bits appended.
    pub fuel: u64,
    /// Maximum output length in bits.
    pub output_cap: usize,
}

impl MachineConfig {
    pub fn new(mode: Mode) -> Self {
        MachineConfig { mode, fuel: 4096, output_cap: 64 }
    }
}

impl Default for MachineConfig {
    fn default() -> Self {
        MachineConfig::new(Mode::Plain)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Op {
    Lit(Bits),
    Zeros(u64),
    Copy(u64),
    CopyAll,
    Rewind,
    Dup,
    Halt,
    Skip(u64),
    Flip(u64),
}

impl Op {
    /// Encoded length in bits, including codeword, operand, and payload.
    pub fn encoded_len(&self) -> usize {
        match self {
            Op::Lit(payload) => 2 + sd_len(payload.len() as u64) + payload.len(),
            Op::Zeros(k) => 2 + sd_len(*k),
            Op::Copy(k) => 3 + sd_len(*k),
            Op::CopyAll => 3,
            Op::Rewind | Op::Dup | Op::Halt => 4,
            Op::Skip(k) => 5 + sd_len(*k),
            Op::Flip(k) => 5 + sd_len(*k),
        }
    }

    pub fn encode(&self) -> Bits {
        let mut out: Bits = match self {
            Op::Lit(_) => "00",
            Op::Zeros(_) => "01",
            Op::Copy(_) => "100",
            Op::CopyAll => "101",
            Op::Rewind => "1100",
            Op::Dup => "1101",
            Op::Halt => "1110",
            Op::Skip(_) => "11110",
            Op::Flip(_) => "11111",
        }
        .parse()
        .unwrap();
        match self {
            Op::Lit(payload) => {
                out.extend(&sd_encode(payload.len() as u64));
                out.extend(payload);
            }
            Op::Zeros(k) | Op::Copy(k) | Op::Skip(k) | Op::Flip(k) => {
                out.extend(&sd_encode(*k));
            }
            _ => {}
        }
        out
    }
}

pub fn encode_program(ops: &[Op]) -> Bits {
    let mut out = Bits::new();
    for op in ops {
        out.extend(&op.encode());
    }
    out
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailReason {
    #[error("program ends mid codeword, operand, or payload")]
    IncompleteOpcode,
    #[error("operand is malformed")]
    OperandUnderflow,
    #[error("read past the end of the condition")]
    ConditionOverrun,
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error("output would exceed the cap")]
    OutputCapExceeded,
    #[error("bits remain after HALT")]
    TrailingBitsAfterHalt,
    #[error("program exhausted without reaching HALT")]
    HaltNotReached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExecOutcome {
    Halted(Bits),
    Fail(FailReason),
}

impl ExecOutcome {
    pub fn output(&self) -> Option<&Bits> {
        match self {
            ExecOutcome::Halted(out) => Some(out),
            ExecOutcome::Fail(_) => None,
        }
    }
}

/// Parses `p` into opcodes.
///
/// Plain mode succeeds iff `p` decomposes exactly into complete opcodes;
/// prefix-free mode succeeds iff decomposition reaches a HALT whose last bit
/// is the last bit of `p`. Parsing never looks at the condition.
pub fn parse_program(p: &Bits, mode: Mode) -> Result<Vec<Op>, FailReason> {
    let mut ops = Vec::new();
    let mut pos = 0usize;
    while pos < p.len() {
        let (op, used) = parse_op(p, pos)?;
        pos += used;
        let is_halt = op == Op::Halt;
        ops.push(op);
        if is_halt && mode == Mode::PrefixFree {
            if pos == p.len() {
                return Ok(ops);
            }
            return Err(FailReason::TrailingBitsAfterHalt);
        }
    }
    match mode {
        Mode::Plain => Ok(ops),
        Mode::PrefixFree => Err(FailReason::HaltNotReached),
    }
}

fn parse_op(p: &Bits, start: usize) -> Result<(Op, usize), FailReason> {
    let bit = |i: usize| p.get(start + i).ok_or(FailReason::IncompleteOpcode);
    let operand = |after: usize| -> Result<(u64, usize), FailReason> {
        let rest = p.slice(start + after, p.len());
        match sd_decode(&rest) {
            Ok((d, used)) => Ok((d, used)),
            // a terminator as the first pair means an operand with no digits;
            // any other UnexpectedEnd means the program ran out of bits
            Err(CodeError::UnexpectedEnd)
                if rest.get(0) == Some(0) && rest.get(1) == Some(1) =>
            {
                Err(FailReason::OperandUnderflow)
            }
            Err(CodeError::UnexpectedEnd) => Err(FailReason::IncompleteOpcode),
            Err(_) => Err(FailReason::OperandUnderflow),
        }
    };
    match bit(0)? {
        0 => match bit(1)? {
            0 => {
                // LIT
                let (k, used) = operand(2)?;
                let k = k as usize;
                let payload_start = start + 2 + used;
                if payload_start + k > p.len() {
                    return Err(FailReason::IncompleteOpcode);
                }
                let payload = p.slice(payload_start, payload_start + k);
                Ok((Op::Lit(payload), 2 + used + k))
            }
            _ => {
                let (k, used) = operand(2)?;
                Ok((Op::Zeros(k), 2 + used))
            }
        },
        _ => match bit(1)? {
            0 => match bit(2)? {
                0 => {
                    let (k, used) = operand(3)?;
                    Ok((Op::Copy(k), 3 + used))
                }
                _ => Ok((Op::CopyAll, 3)),
            },
            _ => match bit(2)? {
                0 => match bit(3)? {
                    0 => Ok((Op::Rewind, 4)),
                    _ => Ok((Op::Dup, 4)),
                },
                _ => match bit(3)? {
                    0 => Ok((Op::Halt, 4)),
                    _ => match bit(4)? {
                        0 => {
                            let (k, used) = operand(5)?;
                            Ok((Op::Skip(k), 5 + used))
                        }
                        _ => {
                            let (k, used) = operand(5)?;
                            Ok((Op::Flip(k), 5 + used))
                        }
                    },
                },
            },
        },
    }
}

/// Incremental execution state, shared by `execute` and the table builder's
/// pruned enumerator so both follow identical semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecState {
    pub output: Bits,
    pub cursor: usize,
    pub cost: u64,
    pub halted: bool,
}

impl ExecState {
    pub fn new() -> Self {
        ExecState { output: Bits::new(), cursor: 0, cost: 0, halted: false }
    }

    /// Executes one opcode. Check order: condition bounds, output cap, then
    /// fuel after the op's cost is accrued.
    pub fn step(&mut self, op: &Op, condition: &Bits, cfg: &MachineConfig) -> Result<(), FailReason> {
        debug_assert!(!self.halted);
        self.cost += 1;
        match op {
            Op::Lit(payload) => {
                self.append_checked(payload.len(), cfg)?;
                self.output.extend(payload);
            }
            Op::Zeros(k) => {
                let k = *k as usize;
                self.append_checked(k, cfg)?;
                for _ in 0..k {
                    self.output.push(0);
                }
            }
            Op::Copy(k) => self.copy_from_condition(*k as usize, condition, cfg, false)?,
            Op::CopyAll => {
                let k = condition.len() - self.cursor;
                self.copy_from_condition(k, condition, cfg, false)?;
            }
            Op::Rewind => self.cursor = 0,
            Op::Dup => {
                let k = self.output.len();
                self.append_checked(k, cfg)?;
                let copy = self.output.clone();
                self.output.extend(&copy);
            }
            Op::Halt => self.halted = true,
            Op::Skip(k) => {
                let k = *k as usize;
                if self.cursor + k > condition.len() {
                    return Err(FailReason::ConditionOverrun);
                }
                self.cursor += k;
            }
            Op::Flip(k) => self.copy_from_condition(*k as usize, condition, cfg, true)?,
        }
        if self.cost > cfg.fuel {
            return Err(FailReason::FuelExhausted);
        }
        Ok(())
    }

    fn append_checked(&mut self, k: usize, cfg: &MachineConfig) -> Result<(), FailReason> {
        if self.output.len() + k > cfg.output_cap {
            return Err(FailReason::OutputCapExceeded);
        }
        self.cost += k as u64;
        Ok(())
    }

    fn copy_from_condition(
        &mut self,
        k: usize,
        condition: &Bits,
        cfg: &MachineConfig,
        negate: bool,
    ) -> Result<(), FailReason> {
        if self.cursor + k > condition.len() {
            return Err(FailReason::ConditionOverrun);
        }
        self.append_checked(k, cfg)?;
        for i in 0..k {
            let b = condition.get(self.cursor + i).unwrap();
            self.output.push(if negate { 1 - b } else { b });
        }
        self.cursor += k;
        Ok(())
    }
}

impl Default for ExecState {
    fn default() -> Self {
        ExecState::new()
    }
}

/// Runs `p` on `condition` under `cfg`. Deterministic.
pub fn execute(p: &Bits, condition: &Bits, cfg: &MachineConfig) -> ExecOutcome {
    let ops = match parse_program(p, cfg.mode) {
        Ok(ops) => ops,
        Err(reason) => return ExecOutcome::Fail(reason),
    };
    let mut state = ExecState::new();
    for op in &ops {
        if let Err(reason) = state.step(op, condition, cfg) {
            return ExecOutcome::Fail(reason);
        }
        if state.halted {
            break;
        }
    }
    // plain mode halts at exhaustion; prefix-free always ends on HALT
    ExecOutcome::Halted(state.output)
}

/// Normative description of the machine, hashed into every table key so that
/// cached tables can never silently outlive a semantics change.
pub const MACHINE_SPEC: &str = "ailab-machine v1\n\
    opcodes: 00=LIT 01=ZEROS 100=COPY 101=COPYALL 1100=REWIND 1101=DUP 1110=HALT 11110=SKIP 11111=FLIP\n\
    operand: doubled-bit self-delimiting integer, terminator 01, bin(0)=0\n\
    lit: operand-many raw payload bits follow the operand\n\
    cost: opcodes executed + output bits appended\n\
    plain: halt at exhaustion; prefix: first HALT must end the program\n\
    dup on empty output is a no-op; copyall at end appends nothing\n";

pub fn machine_fingerprint() -> String {
    let mut hasher = Sha256::new();
    hasher.update(MACHINE_SPEC.as_bytes());
    format!("{:x}", hasher.finalize())
}

/// Calls `f` with every opcode whose encoding fits in `budget` bits.
///
/// LIT is reported once per payload length with an empty payload; the caller
/// expands payloads itself. Enumeration order is fixed, so everything built on
/// top is deterministic.
pub fn for_each_op_fitting(budget: usize, mut f: impl FnMut(Op)) {
    if budget >= 3 {
        f(Op::CopyAll);
    }
    if budget >= 4 {
        f(Op::Rewind);
        f(Op::Dup);
        f(Op::Halt);
    }
    // operand-carrying ops, k ascending
    let mut k = 0u64;
    while 2 + sd_len(k) <= budget {
        f(Op::Zeros(k));
        k += 1;
    }
    let mut k = 0u64;
    while 3 + sd_len(k) <= budget {
        f(Op::Copy(k));
        k += 1;
    }
    let mut k = 0u64;
    while 5 + sd_len(k) <= budget {
        f(Op::Skip(k));
        f(Op::Flip(k));
        k += 1;
    }
    let mut k = 0u64;
    while 2 + sd_len(k) + k as usize <= budget {
        f(Op::Lit(Bits::from_index(0, k as usize)));
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    fn cfg(mode: Mode) -> MachineConfig {
        MachineConfig::new(mode)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_program(&bits("101"), Mode::Plain), Ok(vec![Op::CopyAll]));
        assert_eq!(
            parse_program(&bits("1"), Mode::Plain),
            Err(FailReason::IncompleteOpcode)
        );
        assert_eq!(
            parse_program(&bits("1011110"), Mode::PrefixFree),
            Ok(vec![Op::CopyAll, Op::Halt])
        );
    }

    #[test]
    fn parse_prefix_free_errors() {
        assert_eq!(
            parse_program(&bits("101"), Mode::PrefixFree),
            Err(FailReason::HaltNotReached)
        );
        assert_eq!(
            parse_program(&bits("1110101"), Mode::PrefixFree),
            Err(FailReason::TrailingBitsAfterHalt)
        );
    }

    #[test]
    fn parse_operand_errors() {
        // ZEROS followed by the malformed pair 10
        assert_eq!(
            parse_program(&bits("011011"), Mode::Plain),
            Err(FailReason::OperandUnderflow)
        );
        // ZEROS followed by terminator with no digits
        assert_eq!(
            parse_program(&bits("0101"), Mode::Plain),
            Err(FailReason::OperandUnderflow)
        );
        // ZEROS cut mid-operand
        assert_eq!(
            parse_program(&bits("0111"), Mode::Plain),
            Err(FailReason::IncompleteOpcode)
        );
        // LIT with missing payload bits
        assert_eq!(
            parse_program(&bits("00110001"), Mode::Plain),
            Err(FailReason::IncompleteOpcode)
        );
    }

    #[test]
    fn execute_examples() {
        assert_eq!(
            execute(&bits("101"), &bits("0110"), &cfg(Mode::Plain)),
            ExecOutcome::Halted(bits("0110"))
        );
        assert_eq!(
            execute(&bits("011101"), &Bits::new(), &cfg(Mode::Plain)),
            ExecOutcome::Halted(bits("0"))
        );
        assert_eq!(
            execute(&bits("1011110"), &bits("11"), &cfg(Mode::PrefixFree)),
            ExecOutcome::Halted(bits("11"))
        );
    }

    #[test]
    fn empty_program_plain_halts_empty() {
        assert_eq!(
            execute(&Bits::new(), &bits("101"), &cfg(Mode::Plain)),
            ExecOutcome::Halted(Bits::new())
        );
    }

    #[test]
    fn copy_and_flip_and_rewind() {
        // COPY 2, REWIND, FLIP 2 over condition 10 -> "10" then "01"
        let p = encode_program(&[Op::Copy(2), Op::Rewind, Op::Flip(2)]);
        assert_eq!(
            execute(&p, &bits("10"), &cfg(Mode::Plain)),
            ExecOutcome::Halted(bits("1001"))
        );
    }

    #[test]
    fn condition_overrun() {
        let p = encode_program(&[Op::Copy(3)]);
        assert_eq!(
            execute(&p, &bits("10"), &cfg(Mode::Plain)),
            ExecOutcome::Fail(FailReason::ConditionOverrun)
        );
        let p = encode_program(&[Op::Skip(3)]);
        assert_eq!(
            execute(&p, &bits("10"), &cfg(Mode::Plain)),
            ExecOutcome::Fail(FailReason::ConditionOverrun)
        );
    }

    #[test]
    fn copyall_at_end_is_noop() {
        let p = encode_program(&[Op::CopyAll, Op::CopyAll]);
        assert_eq!(
            execute(&p, &bits("11"), &cfg(Mode::Plain)),
            ExecOutcome::Halted(bits("11"))
        );
    }

    #[test]
    fn dup_on_empty_is_noop() {
        let p = encode_program(&[Op::Dup]);
        assert_eq!(
            execute(&p, &Bits::new(), &cfg(Mode::Plain)),
            ExecOutcome::Halted(Bits::new())
        );
    }

    #[test]
    fn dup_doubles() {
        let p = encode_program(&[Op::Lit(bits("10")), Op::Dup, Op::Dup]);
        assert_eq!(
            execute(&p, &Bits::new(), &cfg(Mode::Plain)),
            ExecOutcome::Halted(bits("10101010"))
        );
    }

    #[test]
    fn output_cap_enforced() {
        let mut c = cfg(Mode::Plain);
        c.output_cap = 4;
        let p = encode_program(&[Op::Zeros(5)]);
        assert_eq!(
            execute(&p, &Bits::new(), &c),
            ExecOutcome::Fail(FailReason::OutputCapExceeded)
        );
        let p = encode_program(&[Op::Zeros(3), Op::Dup]);
        assert_eq!(
            execute(&p, &Bits::new(), &c),
            ExecOutcome::Fail(FailReason::OutputCapExceeded)
        );
    }

    #[test]
    fn fuel_exhaustion_and_monotonicity() {
        let mut c = cfg(Mode::Plain);
        c.fuel = 3;
        let p = encode_program(&[Op::Zeros(4)]);
        assert_eq!(execute(&p, &Bits::new(), &c), ExecOutcome::Fail(FailReason::FuelExhausted));
        // halts with fuel 5; identical output for every larger fuel
        c.fuel = 5;
        let expected = execute(&p, &Bits::new(), &c);
        assert_eq!(expected, ExecOutcome::Halted(bits("0000")));
        for fuel in 5..40 {
            c.fuel = fuel;
            assert_eq!(execute(&p, &Bits::new(), &c), expected);
        }
    }

    #[test]
    fn plain_stops_at_first_halt() {
        let p = encode_program(&[Op::Zeros(1), Op::Halt, Op::Zeros(2)]);
        assert_eq!(
            execute(&p, &Bits::new(), &cfg(Mode::Plain)),
            ExecOutcome::Halted(bits("0"))
        );
    }

    #[test]
    fn determinism() {
        let p = bits("001101111110");
        let cond = bits("0101");
        let first = execute(&p, &cond, &cfg(Mode::Plain));
        for _ in 0..10 {
            assert_eq!(execute(&p, &cond, &cfg(Mode::Plain)), first);
        }
    }

    #[test]
    fn opcode_table_is_prefix_free() {
        let codewords = ["00", "01", "100", "101", "1100", "1101", "1110", "11110", "11111"];
        for (i, a) in codewords.iter().enumerate() {
            for (j, b) in codewords.iter().enumerate() {
                if i != j {
                    assert!(!b.starts_with(a), "{a} prefixes {b}");
                }
            }
        }
        // and complete: Kraft sum is exactly 1
        let kraft: f64 = codewords.iter().map(|c| 0.5f64.powi(c.len() as i32)).sum();
        assert!((kraft - 1.0).abs() < 1e-12);
    }

    #[test]
    fn encode_parse_round_trip() {
        let ops = vec![
            Op::Lit(bits("011")),
            Op::Zeros(2),
            Op::Copy(1),
            Op::CopyAll,
            Op::Rewind,
            Op::Dup,
            Op::Skip(0),
            Op::Flip(4),
            Op::Halt,
        ];
        let p = encode_program(&ops);
        assert_eq!(parse_program(&p, Mode::PrefixFree), Ok(ops.clone()));
        assert_eq!(parse_program(&p, Mode::Plain), Ok(ops));
    }

    #[test]
    fn encoded_len_matches_encoding() {
        let ops = [
            Op::Lit(bits("01101")),
            Op::Zeros(7),
            Op::Copy(3),
            Op::CopyAll,
            Op::Rewind,
            Op::Dup,
            Op::Halt,
            Op::Skip(2),
            Op::Flip(9),
        ];
        for op in &ops {
            assert_eq!(op.encode().len(), op.encoded_len(), "{op:?}");
        }
    }

    #[test]
    fn lit_cost_formula() {
        // LIT literal description cost is |x| + 2⌊log₂|x|⌋ + 6 for |x| ≥ 1
        for n in 1usize..=16 {
            let x = Bits::from_index(0, n);
            let log = (usize::BITS - 1 - n.leading_zeros()) as usize;
            assert_eq!(Op::Lit(x).encoded_len(), n + 2 * log + 6);
        }
    }
}
