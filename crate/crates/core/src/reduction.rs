//! Euclid-style index reduction on compositions.
//!
//! Every seaweed is first brought to a parabolic state `(t | a)` at some rank
//! `n`, meaning the pair whose first composition is the single block `t`.
//! Each step then either removes a balanced block or replaces a block by its
//! remainder modulo the imbalance
//!
//! ```text
//! d_i = (a_1 + … + a_{i-1}) − (a_{i+1} + … + a_k + a_{k+1}),   a_{k+1} = t − |a|
//! ```
//!
//! until a closed form applies. Work per step is linear in the number of
//! blocks and independent of their magnitude, so ranks with hundreds of
//! digits are fine.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::spec::{AlgebraType, SeaweedSpec, Side};

/// What the value of a state measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Type-A index of `(t | a)` with `t = |a| = n`.
    TypeA,
    /// Type-C (equivalently B) index of `(t | a)` at rank `n`.
    TypeC,
    /// Type-D index of `(t | a)` at rank `n`, outside Ξ.
    TypeD,
    /// Ψ of the type-A pair `(t | a)` with `t = |a| = n`.
    Psi,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::TypeA => "A",
            Mode::TypeC => "C",
            Mode::TypeD => "D",
            Mode::Psi => "psi",
        }
    }
}

/// `α + value(t | a at rank n)` is constant along a reduction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ReductionState {
    pub mode: Mode,
    pub n: BigUint,
    pub t: BigUint,
    pub blocks: Vec<BigUint>,
    pub alpha: BigUint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Swap, rank padding and symmetrization into a parabolic state.
    ToParabolic,
    /// Type-D Ξ state rewritten as Ψ of a type-A pair.
    ToPsi,
    /// A block with `d_i = 0` is removed and added to α.
    Split,
    /// `a_i` replaced by `a_i mod |d_i|`.
    Shrink,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::ToParabolic => "to-parabolic",
            Rule::ToPsi => "to-psi",
            Rule::Split => "split",
            Rule::Shrink => "shrink",
        }
    }

    fn from_name(s: &str) -> Option<Rule> {
        [Rule::ToParabolic, Rule::ToPsi, Rule::Split, Rule::Shrink]
            .into_iter()
            .find(|r| r.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TerminalRule {
    /// Nothing left: value 0.
    Empty,
    /// `|a| ≤ ⌊t/2⌋`: `Σ⌊a_j/2⌋ + ⌊(t − 2|a|)/2⌋ + (n − t)`.
    ParabolicClosedForm,
    /// The same plus the type-D correction.
    ParabolicClosedFormD,
    /// Ψ of `(N | N)`: `N − 2`, or 1 when `N = 1`.
    PsiSingleBlock,
}

impl TerminalRule {
    pub fn name(self) -> &'static str {
        match self {
            TerminalRule::Empty => "empty",
            TerminalRule::ParabolicClosedForm => "parabolic-closed-form",
            TerminalRule::ParabolicClosedFormD => "parabolic-closed-form-d",
            TerminalRule::PsiSingleBlock => "psi-single-block",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    /// 1-based block position for `Split` and `Shrink`.
    pub i: Option<usize>,
    pub before: Option<ReductionState>,
    pub after: ReductionState,
    /// Increase of α made by this step.
    pub contribution: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Terminal {
    pub rule: TerminalRule,
    pub state: ReductionState,
    /// Value of the terminal state alone (α not included).
    pub value: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub spec: SeaweedSpec,
    pub steps: Vec<Step>,
    pub terminal: Terminal,
    pub index: BigUint,
}

fn sum(blocks: &[BigUint]) -> BigUint {
    blocks.iter().sum()
}

fn to_int(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

impl ReductionState {
    pub fn new(mode: Mode, n: BigUint, t: BigUint, blocks: Vec<BigUint>) -> Result<Self> {
        let blocks: Vec<BigUint> = blocks.into_iter().filter(|b| !b.is_zero()).collect();
        let s = ReductionState {
            mode,
            n,
            t,
            blocks,
            alpha: BigUint::zero(),
        };
        s.check()?;
        Ok(s)
    }

    /// Parabolic type-C state `(t | a)` at rank `n`.
    pub fn parabolic_c(n: u64, t: u64, blocks: &[u64]) -> Result<Self> {
        Self::new(
            Mode::TypeC,
            n.into(),
            t.into(),
            blocks.iter().map(|&b| BigUint::from(b)).collect(),
        )
    }

    fn check(&self) -> Result<()> {
        let total = sum(&self.blocks);
        if total > self.t || self.t > self.n {
            return Err(Error::Domain(format!(
                "state needs |a| <= t <= n, got |a|={total}, t={}, n={}",
                self.t, self.n
            )));
        }
        if matches!(self.mode, Mode::TypeA | Mode::Psi) && (total != self.t || self.t != self.n) {
            return Err(Error::Domain(format!(
                "type-A states need |a| = t = n, got |a|={total}, t={}, n={}",
                self.t, self.n
            )));
        }
        Ok(())
    }

    pub fn composition(&self) -> Composition {
        Composition::new(self.blocks.iter().cloned())
    }

    pub fn total(&self) -> BigUint {
        sum(&self.blocks)
    }

    /// `a_{k+1} = t − |a|`.
    pub fn tail(&self) -> BigUint {
        &self.t - self.total()
    }

    /// The imbalances `d_1, …, d_k`.
    pub fn imbalances(&self) -> Vec<BigInt> {
        let k = self.blocks.len();
        let mut suffix = vec![BigUint::zero(); k + 1];
        suffix[k] = self.tail();
        for i in (0..k).rev() {
            suffix[i] = &suffix[i + 1] + &self.blocks[i];
        }
        let mut prefix = BigUint::zero();
        let mut d = Vec::with_capacity(k);
        for i in 0..k {
            d.push(to_int(&prefix) - to_int(&suffix[i + 1]));
            prefix += &self.blocks[i];
        }
        d
    }

    /// The rule applying next, with its 0-based block position.
    ///
    /// Priority: the smallest `i` with `d_i = 0`, otherwise the smallest `i`
    /// with `a_i ≥ |d_i| > 0`.
    pub fn next_rule(&self) -> Option<(Rule, usize)> {
        if self.mode == Mode::Psi && self.blocks.len() <= 1 {
            return None;
        }
        let d = self.imbalances();
        if let Some(i) = d.iter().position(|x| x.is_zero()) {
            return Some((Rule::Split, i));
        }
        d.iter()
            .zip(&self.blocks)
            .position(|(d, a)| a >= d.magnitude())
            .map(|i| (Rule::Shrink, i))
    }

    /// Applies `rule` at 0-based position `i`, returning the α increase.
    pub fn apply(&mut self, rule: Rule, i: usize) -> Result<BigUint> {
        if i >= self.blocks.len() {
            return Err(Error::IndexOutOfRange(format!(
                "block {} of {}",
                i + 1,
                self.blocks.len()
            )));
        }
        let d = self.imbalances().swap_remove(i);
        match rule {
            Rule::Split => {
                if !d.is_zero() {
                    return Err(Error::Invariant(format!(
                        "split at block {} with d != 0",
                        i + 1
                    )));
                }
                let a = self.blocks.remove(i);
                self.t -= &a;
                self.n -= &a;
                self.alpha += &a;
                Ok(a)
            }
            Rule::Shrink => {
                let m = d.magnitude();
                if m.is_zero() || &self.blocks[i] < m {
                    return Err(Error::Invariant(format!(
                        "shrink at block {} needs a_i >= |d_i| > 0",
                        i + 1
                    )));
                }
                let r = &self.blocks[i] % m;
                let delta = &self.blocks[i] - &r;
                self.t -= &delta;
                self.n -= &delta;
                if r.is_zero() {
                    self.blocks.remove(i);
                } else {
                    self.blocks[i] = r;
                }
                Ok(BigUint::zero())
            }
            Rule::ToParabolic | Rule::ToPsi => Err(Error::Domain(format!(
                "{} is not a block rule",
                rule.name()
            ))),
        }
    }

    /// Closed-form value of a state no block rule applies to.
    pub fn terminal(&self) -> Result<(TerminalRule, BigUint)> {
        match self.mode {
            Mode::TypeA => {
                if self.blocks.is_empty() {
                    Ok((TerminalRule::Empty, BigUint::zero()))
                } else {
                    Err(self.stuck())
                }
            }
            Mode::Psi => {
                if self.blocks.len() != 1 {
                    return Err(self.stuck());
                }
                let v = if self.t.is_one() {
                    BigUint::one()
                } else {
                    &self.t - 2u32
                };
                Ok((TerminalRule::PsiSingleBlock, v))
            }
            Mode::TypeC => {
                let v = parabolic_closed_form(&self.n, &self.t, &self.blocks)
                    .ok_or_else(|| self.stuck())?;
                let rule = if self.blocks.is_empty() && self.t.is_zero() {
                    TerminalRule::Empty
                } else {
                    TerminalRule::ParabolicClosedForm
                };
                Ok((rule, v))
            }
            Mode::TypeD => {
                let v = parabolic_closed_form(&self.n, &self.t, &self.blocks)
                    .ok_or_else(|| self.stuck())?;
                let v = to_int(&v) + self.epsilon_d();
                let v = v.to_biguint().ok_or_else(|| {
                    Error::Invariant(format!("negative type-D terminal value at {self:?}"))
                })?;
                Ok((TerminalRule::ParabolicClosedFormD, v))
            }
        }
    }

    /// Type-D correction of a terminal parabolic state outside Ξ.
    ///
    /// With `s = t − |a|` odd and `t = n`, the arc joining the two central
    /// vertices lies on a segment exactly when vertex 1 has no upper arc,
    /// i.e. when `a_1 = 1`, or `a = ∅` and `t = 1`.
    fn epsilon_d(&self) -> i32 {
        if !self.tail().bit(0) {
            return 0;
        }
        if self.t != self.n {
            return -1;
        }
        let on_segment = match self.blocks.first() {
            None => self.t.is_one(),
            Some(a1) => a1.is_one(),
        };
        if on_segment {
            1
        } else {
            -1
        }
    }

    fn stuck(&self) -> Error {
        Error::Invariant(format!("no rule or closed form applies to {self:?}"))
    }
}

/// `Σ⌊a_j/2⌋ + ⌊(t − 2|a|)/2⌋ + (n − t)`, valid when `2|a| ≤ t`.
pub fn parabolic_closed_form(n: &BigUint, t: &BigUint, blocks: &[BigUint]) -> Option<BigUint> {
    let total = sum(blocks);
    let twice = &total * 2u32;
    if &twice > t {
        return None;
    }
    let halves: BigUint = blocks.iter().map(|a| a >> 1u32).sum();
    Some(halves + ((t - twice) >> 1u32) + (n - t))
}

impl fmt::Debug for ReductionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] ({}|{:?}) n={}",
            self.mode.name(),
            self.t,
            self.composition(),
            self.n
        )?;
        if !self.alpha.is_zero() {
            write!(f, " α={}", self.alpha)?;
        }
        Ok(())
    }
}

impl fmt::Display for ReductionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.t, self.composition())
    }
}

/// The parabolic state a spec reduces from, with its conversion steps.
fn start(spec: &SeaweedSpec) -> Result<Vec<Step>> {
    let mut steps = Vec::new();
    let (a, b) = larger_first(spec);
    let twice = a.total() * 2u32;
    let blocks: Vec<BigUint> = a.reversed().concat(b).blocks().to_vec();
    match spec.algebra() {
        AlgebraType::A => {
            let n = spec.n() * 2u32;
            let s = ReductionState::new(Mode::TypeA, n.clone(), n, blocks)?;
            steps.push(conversion(Rule::ToParabolic, None, s));
        }
        AlgebraType::B | AlgebraType::C => {
            let mut s = ReductionState::new(Mode::TypeC, twice.clone(), twice, blocks)?;
            s.alpha = spec.n() - a.total();
            steps.push(conversion(Rule::ToParabolic, None, s));
        }
        AlgebraType::D => {
            let n = spec.n() + a.total();
            let s = ReductionState::new(Mode::TypeD, n, twice, blocks)?;
            if spec.xi_membership().in_xi {
                let before = s.clone();
                let mut grown = s.blocks.clone();
                *grown.last_mut().expect("Ξ pair has a non-empty short side") += 1u32;
                let psi = ReductionState::new(Mode::Psi, s.n.clone(), s.t.clone(), grown)?;
                steps.push(conversion(Rule::ToParabolic, None, s));
                steps.push(conversion(Rule::ToPsi, Some(before), psi));
            } else {
                steps.push(conversion(Rule::ToParabolic, None, s));
            }
        }
    }
    Ok(steps)
}

fn conversion(rule: Rule, before: Option<ReductionState>, after: ReductionState) -> Step {
    let contribution = match &before {
        Some(b) => &after.alpha - &b.alpha,
        None => after.alpha.clone(),
    };
    Step {
        rule,
        i: None,
        before,
        after,
        contribution,
    }
}

/// The pair ordered so that the first total is the larger one (the full side
/// for Ξ pairs).
fn larger_first(spec: &SeaweedSpec) -> (&Composition, &Composition) {
    let xi = spec.xi_membership();
    let top_first = match xi.full_side {
        Some(side) => side == Side::Top,
        None => spec.top().total() >= spec.bottom().total(),
    };
    if top_first {
        (spec.top(), spec.bottom())
    } else {
        (spec.bottom(), spec.top())
    }
}

/// Runs the block rules to a terminal state.
fn run(mut state: ReductionState, steps: &mut Vec<Step>) -> Result<Terminal> {
    while let Some((rule, i)) = state.next_rule() {
        let before = state.clone();
        let contribution = state.apply(rule, i)?;
        if state.mode == Mode::TypeD && state.t == state.n && state.tail().is_one() {
            return Err(Error::Invariant(format!(
                "type-D reduction entered Ξ at {state:?}"
            )));
        }
        steps.push(Step {
            rule,
            i: Some(i + 1),
            before: Some(before),
            after: state.clone(),
            contribution,
        });
    }
    let (rule, value) = state.terminal()?;
    Ok(Terminal { rule, state, value })
}

/// Index of any seaweed by reduction, with the full trace.
pub fn index(spec: &SeaweedSpec) -> Result<(BigUint, ReductionTrace)> {
    let mut steps = start(spec)?;
    let state = steps.last().expect("at least one conversion").after.clone();
    let terminal = run(state, &mut steps)?;
    let index = &terminal.state.alpha + &terminal.value;
    Ok((
        index.clone(),
        ReductionTrace {
            spec: spec.clone(),
            steps,
            terminal,
            index,
        },
    ))
}

/// Index without keeping the trace.
pub fn index_value(spec: &SeaweedSpec) -> Result<BigUint> {
    let steps = start(spec)?;
    let mut state = steps
        .into_iter()
        .last()
        .expect("at least one conversion")
        .after;
    while let Some((rule, i)) = state.next_rule() {
        state.apply(rule, i)?;
    }
    let (_, value) = state.terminal()?;
    Ok(state.alpha + value)
}

pub fn index_a_reduced(spec: &SeaweedSpec) -> Result<(BigUint, ReductionTrace)> {
    require(spec, &[AlgebraType::A], "A")?;
    index(spec)
}

pub fn index_bc_reduced(spec: &SeaweedSpec) -> Result<(BigUint, ReductionTrace)> {
    require(spec, &[AlgebraType::B, AlgebraType::C], "B or C")?;
    index(spec)
}

pub fn index_d_reduced(spec: &SeaweedSpec) -> Result<(BigUint, ReductionTrace)> {
    require(spec, &[AlgebraType::D], "D")?;
    index(spec)
}

fn require(spec: &SeaweedSpec, ok: &[AlgebraType], expected: &'static str) -> Result<()> {
    if ok.contains(&spec.algebra()) {
        Ok(())
    } else {
        Err(Error::WrongType {
            expected,
            got: spec.algebra().letter(),
        })
    }
}

/// Value of an arbitrary state: `α` plus the value of `(t | a)` at rank `n`.
pub fn state_value(state: &ReductionState) -> Result<BigUint> {
    state.check()?;
    let mut s = state.clone();
    while let Some((rule, i)) = s.next_rule() {
        s.apply(rule, i)?;
    }
    let (_, v) = s.terminal()?;
    Ok(s.alpha + v)
}

/// Runs type-C block rules on `(t | a)` at rank `t` until `|c| ≤ s`, where
/// `s = t − |a|` is fixed by the rules. Returns `(α, c)` with
/// `value(t | a) = α + value(s + |c| | c)`.
pub fn reduction_core(t: &BigUint, blocks: &[BigUint]) -> Result<(BigUint, Composition)> {
    let mut state = ReductionState::new(Mode::TypeC, t.clone(), t.clone(), blocks.to_vec())?;
    let s = state.tail();
    while state.total() > s {
        match state.next_rule() {
            Some((rule, i)) => {
                state.apply(rule, i)?;
            }
            None => return Err(state.stuck()),
        }
    }
    let comp = state.composition();
    Ok((state.alpha, comp))
}

/// Inserts the block `a^{i,j}` into a parabolic state, keeping its value.
///
/// With `a_{i,j} = (a_1 + … + a_i) − (a_j + … + a_{k+1})` and
/// `a^{i,j} = a_{i+1} + … + a_{j−1} + |a_{i,j}|`, the new block goes right
/// after `a_i` when `a_{i,j} < 0` and right before `a_j` otherwise; `t` and
/// `n` grow by `a^{i,j}`. Positions are 1-based with `1 ≤ i < j ≤ k + 1`.
pub fn insert_block_c(state: &ReductionState, i: usize, j: usize) -> Result<ReductionState> {
    let k = state.blocks.len();
    if !(1 <= i && i < j && j <= k + 1) {
        return Err(Error::IndexOutOfRange(format!(
            "need 1 <= i < j <= {}, got i={i}, j={j}",
            k + 1
        )));
    }
    let head = to_int(&sum(&state.blocks[..i]));
    let tail_from_j = to_int(&(sum(&state.blocks[j - 1..]) + state.tail()));
    let a_ij = head - tail_from_j;
    let inner = sum(&state.blocks[i..j - 1]);
    let grow = inner + a_ij.magnitude();
    let mut blocks = state.blocks.clone();
    let at = if a_ij.is_negative() { i } else { j - 1 };
    blocks.insert(at, grow.clone());
    let mut out = ReductionState::new(state.mode, &state.n + &grow, &state.t + &grow, blocks)?;
    out.alpha = state.alpha.clone();
    Ok(out)
}

/// Replaces `a_i` by `a_i + α|d_i|` (any integer α keeping it non-negative),
/// shifting `t` and `n` by the same amount. Position is 1-based.
pub fn alpha_step(state: &ReductionState, i: usize, alpha: &BigInt) -> Result<ReductionState> {
    if i == 0 || i > state.blocks.len() {
        return Err(Error::IndexOutOfRange(format!(
            "block {i} of {}",
            state.blocks.len()
        )));
    }
    let d = state.imbalances().swap_remove(i - 1);
    let delta = alpha * to_int(d.magnitude());
    let shift = |x: &BigUint| -> Result<BigUint> {
        (to_int(x) + &delta)
            .to_biguint()
            .ok_or_else(|| Error::Domain(format!("α = {alpha} makes a quantity negative")))
    };
    let mut blocks = state.blocks.clone();
    blocks[i - 1] = shift(&blocks[i - 1])?;
    let mut out = ReductionState::new(state.mode, shift(&state.n)?, shift(&state.t)?, blocks)?;
    out.alpha = state.alpha.clone();
    Ok(out)
}

/// Rewrites the first blocks of a type-C pair with `|b| ≤ |a|` and
/// `a_1 > b_1`: the pair becomes
/// `(a_1 − b_1 − r, r, a_2, … | b_2, …)` at rank `n − b_1`,
/// with `r = a_1 mod (a_1 − b_1)`. The index is unchanged.
pub fn first_block_rewrite(spec: &SeaweedSpec) -> Result<Option<SeaweedSpec>> {
    require(spec, &[AlgebraType::B, AlgebraType::C], "B or C")?;
    let (a, b) = (spec.top(), spec.bottom());
    if b.total() > a.total() || a.is_empty() || b.is_empty() || a.blocks()[0] <= b.blocks()[0] {
        return Ok(None);
    }
    let (a1, b1) = (&a.blocks()[0], &b.blocks()[0]);
    let diff = a1 - b1;
    let r = a1 % &diff;
    let mut top = vec![&diff - &r, r];
    top.extend(a.blocks()[1..].iter().cloned());
    let bottom = b.blocks()[1..].to_vec();
    SeaweedSpec::new(
        spec.algebra(),
        spec.n() - b1,
        Composition::new(top),
        Composition::new(bottom),
    )
    .map(Some)
}

fn num(x: &BigUint) -> Value {
    match x.to_u64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn state_json(s: &ReductionState) -> Value {
    json!({
        "mode": s.mode.name(),
        "n": num(&s.n),
        "t": num(&s.t),
        "blocks": s.blocks.iter().map(num).collect::<Vec<_>>(),
        "alpha": num(&s.alpha),
    })
}

fn parse_num(v: &Value) -> Option<BigUint> {
    match v {
        Value::Number(n) => n.as_u64().map(BigUint::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn parse_state(v: &Value) -> Option<ReductionState> {
    let mode = match v.get("mode")?.as_str()? {
        "A" => Mode::TypeA,
        "C" => Mode::TypeC,
        "D" => Mode::TypeD,
        "psi" => Mode::Psi,
        _ => return None,
    };
    Some(ReductionState {
        mode,
        n: parse_num(v.get("n")?)?,
        t: parse_num(v.get("t")?)?,
        blocks: v
            .get("blocks")?
            .as_array()?
            .iter()
            .map(parse_num)
            .collect::<Option<_>>()?,
        alpha: parse_num(v.get("alpha")?)?,
    })
}

impl ReductionTrace {
    /// Parabolic states visited, conversions included.
    pub fn states(&self) -> impl Iterator<Item = &ReductionState> {
        self.steps.iter().map(|s| &s.after)
    }

    /// One JSON object per line: a header, each step, then the terminal.
    pub fn to_json_lines(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.steps.len() + 2);
        out.push(json!({ "spec": self.spec.to_string() }).to_string());
        for (k, step) in self.steps.iter().enumerate() {
            let mut v = json!({
                "step": k + 1,
                "rule": step.rule.name(),
                "after": state_json(&step.after),
                "contribution": num(&step.contribution),
            });
            if let Some(i) = step.i {
                v["i"] = json!(i);
            }
            if let Some(b) = &step.before {
                v["before"] = state_json(b);
            }
            out.push(v.to_string());
        }
        out.push(
            json!({
                "terminal": self.terminal.rule.name(),
                "state": state_json(&self.terminal.state),
                "value": num(&self.terminal.value),
                "index": num(&self.index),
            })
            .to_string(),
        );
        out
    }

    /// Reads back the output of [`ReductionTrace::to_json_lines`] and replays
    /// it; see [`replay`].
    pub fn replay_json_lines<S: AsRef<str>>(lines: &[S]) -> Result<BigUint> {
        let bad = |what: &str| Error::Parse {
            input: what.to_string(),
            reason: "malformed trace line".into(),
        };
        let values: Vec<Value> = lines
            .iter()
            .map(|l| serde_json::from_str(l.as_ref()).map_err(|_| bad(l.as_ref())))
            .collect::<Result<_>>()?;
        let (header, rest) = values.split_first().ok_or_else(|| bad("<empty>"))?;
        let (terminal, body) = rest.split_last().ok_or_else(|| bad("<no terminal>"))?;
        let spec: SeaweedSpec = header
            .get("spec")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("header"))?
            .parse()?;
        let mut steps = Vec::with_capacity(body.len());
        for v in body {
            let rule = v
                .get("rule")
                .and_then(Value::as_str)
                .and_then(Rule::from_name)
                .ok_or_else(|| bad(&v.to_string()))?;
            steps.push(Step {
                rule,
                i: v.get("i").and_then(Value::as_u64).map(|i| i as usize),
                before: v.get("before").and_then(parse_state),
                after: v
                    .get("after")
                    .and_then(parse_state)
                    .ok_or_else(|| bad(&v.to_string()))?,
                contribution: v
                    .get("contribution")
                    .and_then(parse_num)
                    .ok_or_else(|| bad(&v.to_string()))?,
            });
        }
        let state = terminal
            .get("state")
            .and_then(parse_state)
            .ok_or_else(|| bad("terminal"))?;
        let value = terminal
            .get("value")
            .and_then(parse_num)
            .ok_or_else(|| bad("terminal"))?;
        let index = terminal
            .get("index")
            .and_then(parse_num)
            .ok_or_else(|| bad("terminal"))?;
        let (rule, _) = state.terminal()?;
        replay(&ReductionTrace {
            spec,
            steps,
            terminal: Terminal { rule, state, value },
            index,
        })
    }
}

/// Re-derives every state of a trace from its spec, checking each recorded
/// step, and returns the index.
pub fn replay(trace: &ReductionTrace) -> Result<BigUint> {
    let conversions = start(&trace.spec)?;
    let nconv = conversions.len();
    if trace.steps.len() < nconv {
        return Err(Error::Invariant(
            "trace is missing its conversion steps".into(),
        ));
    }
    for (k, (want, got)) in conversions.iter().zip(&trace.steps).enumerate() {
        if want.after != got.after || want.rule != got.rule {
            return Err(Error::Invariant(format!(
                "step {}: expected {:?}, trace has {:?}",
                k + 1,
                want.after,
                got.after
            )));
        }
    }
    let mut state = conversions[nconv - 1].after.clone();
    for (k, step) in trace.steps.iter().enumerate().skip(nconv) {
        let i = step
            .i
            .ok_or_else(|| Error::Invariant(format!("step {} has no block position", k + 1)))?;
        state.apply(step.rule, i - 1)?;
        if state != step.after {
            return Err(Error::Invariant(format!(
                "step {}: replay gives {state:?}, trace has {:?}",
                k + 1,
                step.after
            )));
        }
    }
    if state != trace.terminal.state {
        return Err(Error::Invariant(
            "terminal state differs from the last step".into(),
        ));
    }
    let (_, value) = state.terminal()?;
    let index = &state.alpha + &value;
    if value != trace.terminal.value || index != trace.index {
        return Err(Error::Invariant(format!(
            "replayed index {index} differs from recorded {}",
            trace.index
        )));
    }
    Ok(index)
}
