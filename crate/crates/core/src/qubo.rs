//! Exact sparse binary quadratic models.
//!
//! Every energy in this crate is a multiple of 1/4: penalty targets are
//! integers or half-integers, and squaring a half-integer lands on the
//! quarter grid. [`QuarterInt`] stores the numerator over 4 so arithmetic
//! and comparisons stay exact; no floating point is involved anywhere in
//! model construction or evaluation.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

/// Exact energy value, stored as an integer count of quarter units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuarterInt {
    quarters: i64,
}

impl QuarterInt {
    pub const ZERO: QuarterInt = QuarterInt { quarters: 0 };
    pub const ONE: QuarterInt = QuarterInt { quarters: 4 };

    /// Value `quarters / 4`.
    pub fn from_quarters(quarters: i64) -> Self {
        QuarterInt { quarters }
    }

    /// Value `halves / 2`.
    pub fn from_halves(halves: i64) -> Self {
        QuarterInt {
            quarters: halves * 2,
        }
    }

    pub fn from_int(value: i64) -> Self {
        QuarterInt {
            quarters: value * 4,
        }
    }

    pub fn quarters(self) -> i64 {
        self.quarters
    }

    pub fn is_zero(self) -> bool {
        self.quarters == 0
    }

    /// True when the value lies on the half grid (needed for squared targets:
    /// only half-integer targets square back onto the quarter grid).
    pub fn is_half_integral(self) -> bool {
        self.quarters % 2 == 0
    }

    pub fn is_integral(self) -> bool {
        self.quarters % 4 == 0
    }

    /// Exact float view, for temperature schedules and reporting only.
    pub fn as_f64(self) -> f64 {
        self.quarters as f64 / 4.0
    }
}

impl fmt::Display for QuarterInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.quarters % 4 == 0 {
            write!(f, "{}", self.quarters / 4)
        } else if self.quarters % 2 == 0 {
            write!(f, "{}/2", self.quarters / 2)
        } else {
            write!(f, "{}/4", self.quarters)
        }
    }
}

impl Add for QuarterInt {
    type Output = QuarterInt;
    fn add(self, rhs: QuarterInt) -> QuarterInt {
        QuarterInt::from_quarters(self.quarters + rhs.quarters)
    }
}

impl AddAssign for QuarterInt {
    fn add_assign(&mut self, rhs: QuarterInt) {
        self.quarters += rhs.quarters;
    }
}

impl Sub for QuarterInt {
    type Output = QuarterInt;
    fn sub(self, rhs: QuarterInt) -> QuarterInt {
        QuarterInt::from_quarters(self.quarters - rhs.quarters)
    }
}

impl SubAssign for QuarterInt {
    fn sub_assign(&mut self, rhs: QuarterInt) {
        self.quarters -= rhs.quarters;
    }
}

impl Neg for QuarterInt {
    type Output = QuarterInt;
    fn neg(self) -> QuarterInt {
        QuarterInt::from_quarters(-self.quarters)
    }
}

impl Mul<i64> for QuarterInt {
    type Output = QuarterInt;
    fn mul(self, rhs: i64) -> QuarterInt {
        QuarterInt::from_quarters(self.quarters * rhs)
    }
}

impl Sum for QuarterInt {
    fn sum<I: Iterator<Item = QuarterInt>>(iter: I) -> QuarterInt {
        iter.fold(QuarterInt::ZERO, |a, b| a + b)
    }
}

/// A binary literal: a variable, its negation, or a constant.
///
/// Negations are first-class so parity substitutions (a cell defined as the
/// opposite of another cell's variable) fold into coefficients without any
/// term rewriting by the callers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    /// x_i
    Pos(usize),
    /// 1 - x_i
    Neg(usize),
    /// constant 0
    Zero,
    /// constant 1
    One,
}

impl Literal {
    pub fn from_const(value: bool) -> Literal {
        if value {
            Literal::One
        } else {
            Literal::Zero
        }
    }

    /// 1 minus this literal.
    pub fn complement(self) -> Literal {
        match self {
            Literal::Pos(i) => Literal::Neg(i),
            Literal::Neg(i) => Literal::Pos(i),
            Literal::Zero => Literal::One,
            Literal::One => Literal::Zero,
        }
    }

    pub fn value(self, bits: &[bool]) -> bool {
        match self {
            Literal::Pos(i) => bits[i],
            Literal::Neg(i) => !bits[i],
            Literal::Zero => false,
            Literal::One => true,
        }
    }

    /// Decompose into `alpha + beta * x_var`: (alpha, beta, var).
    fn affine(self) -> (i64, i64, Option<usize>) {
        match self {
            Literal::Pos(i) => (0, 1, Some(i)),
            Literal::Neg(i) => (1, -1, Some(i)),
            Literal::Zero => (0, 0, None),
            Literal::One => (1, 0, None),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuboError {
    #[error("variable index {index} out of range (model has {num_vars} variables)")]
    VarOutOfRange { index: usize, num_vars: usize },
    #[error("square penalty needs at least one literal")]
    EmptyLiterals,
    #[error("square penalty weight must be >= 1, got {0}")]
    WeightNotPositive(i64),
    #[error("square penalty target {0} is not a half-integer")]
    FractionalTarget(QuarterInt),
    #[error("assignment has {got} bits, model has {expected} variables")]
    AssignmentLength { got: usize, expected: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Sparse binary quadratic model: `offset + sum a_i x_i + sum b_ij x_i x_j`.
///
/// Quadratic keys always satisfy `i < j` (`x^2 = x` is folded into the linear
/// part) and stored coefficients are nonzero, so equal models compare equal
/// structurally.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Qubo {
    num_vars: usize,
    offset: QuarterInt,
    linear: BTreeMap<usize, QuarterInt>,
    quadratic: BTreeMap<(usize, usize), QuarterInt>,
}

impl Qubo {
    pub fn new(num_vars: usize) -> Self {
        Qubo {
            num_vars,
            ..Qubo::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn offset(&self) -> QuarterInt {
        self.offset
    }

    pub fn linear(&self) -> &BTreeMap<usize, QuarterInt> {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), QuarterInt> {
        &self.quadratic
    }

    pub fn num_linear_terms(&self) -> usize {
        self.linear.len()
    }

    pub fn num_quadratic_terms(&self) -> usize {
        self.quadratic.len()
    }

    fn check_var(&self, index: usize) -> Result<(), QuboError> {
        if index < self.num_vars {
            Ok(())
        } else {
            Err(QuboError::VarOutOfRange {
                index,
                num_vars: self.num_vars,
            })
        }
    }

    fn check_literal(&self, lit: Literal) -> Result<(), QuboError> {
        match lit {
            Literal::Pos(i) | Literal::Neg(i) => self.check_var(i),
            _ => Ok(()),
        }
    }

    pub fn add_offset(&mut self, value: QuarterInt) {
        self.offset += value;
    }

    fn add_linear_raw(&mut self, var: usize, value: QuarterInt) {
        if value.is_zero() {
            return;
        }
        let entry = self.linear.entry(var).or_insert(QuarterInt::ZERO);
        *entry += value;
        if entry.is_zero() {
            self.linear.remove(&var);
        }
    }

    fn add_quadratic_raw(&mut self, a: usize, b: usize, value: QuarterInt) {
        debug_assert_ne!(a, b);
        if value.is_zero() {
            return;
        }
        let key = (a.min(b), a.max(b));
        let entry = self.quadratic.entry(key).or_insert(QuarterInt::ZERO);
        *entry += value;
        if entry.is_zero() {
            self.quadratic.remove(&key);
        }
    }

    /// Adds `weight * a` with constants folded into the offset.
    pub fn add_linear_term(&mut self, a: Literal, weight: QuarterInt) -> Result<(), QuboError> {
        self.check_literal(a)?;
        let (alpha, beta, var) = a.affine();
        self.add_offset(weight * alpha);
        if let Some(i) = var {
            self.add_linear_raw(i, weight * beta);
        }
        Ok(())
    }

    /// Adds `weight * a * b`. Products with constants fold to linear/offset
    /// terms; a literal multiplied by itself folds via `x^2 = x`.
    pub fn add_pair_interaction(
        &mut self,
        a: Literal,
        b: Literal,
        weight: QuarterInt,
    ) -> Result<(), QuboError> {
        self.check_literal(a)?;
        self.check_literal(b)?;
        let (aa, ab, av) = a.affine();
        let (ba, bb, bv) = b.affine();
        // (aa + ab x_a)(ba + bb x_b)
        self.add_offset(weight * (aa * ba));
        match (av, bv) {
            (None, None) => {}
            (Some(i), None) => self.add_linear_raw(i, weight * (ab * ba)),
            (None, Some(j)) => self.add_linear_raw(j, weight * (aa * bb)),
            (Some(i), Some(j)) if i == j => {
                // x_i x_i = x_i
                self.add_linear_raw(i, weight * (ab * ba + aa * bb + ab * bb));
            }
            (Some(i), Some(j)) => {
                self.add_linear_raw(i, weight * (ab * ba));
                self.add_linear_raw(j, weight * (aa * bb));
                self.add_quadratic_raw(i, j, weight * (ab * bb));
            }
        }
        Ok(())
    }

    /// Adds `weight * (target - sum literals)^2`, expanded exactly with
    /// `lit^2 = lit`. The target must be a half-integer so the expansion
    /// stays on the quarter grid.
    pub fn add_square_penalty(
        &mut self,
        target: QuarterInt,
        literals: &[Literal],
        weight: i64,
    ) -> Result<(), QuboError> {
        if literals.is_empty() {
            return Err(QuboError::EmptyLiterals);
        }
        if weight < 1 {
            return Err(QuboError::WeightNotPositive(weight));
        }
        if !target.is_half_integral() {
            return Err(QuboError::FractionalTarget(target));
        }
        for &lit in literals {
            self.check_literal(lit)?;
        }

        // Collapse the literal sum to const + sum coeff_i x_i.
        let mut constant = 0i64;
        let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
        for &lit in literals {
            let (alpha, beta, var) = lit.affine();
            constant += alpha;
            if let Some(i) = var {
                *coeffs.entry(i).or_insert(0) += beta;
            }
        }
        coeffs.retain(|_, c| *c != 0);

        // (c - sum coeff_i x_i)^2 with c = target - constant (a half-integer):
        // c^2 + sum (coeff_i^2 - 2 c coeff_i) x_i + 2 sum_{i<j} coeff_i coeff_j x_i x_j
        let c_halves = target.quarters() / 2 - 2 * constant;
        self.add_offset(QuarterInt::from_quarters(weight * c_halves * c_halves));
        let vars: Vec<(usize, i64)> = coeffs.into_iter().collect();
        for &(i, ci) in &vars {
            // coeff^2 x - 2 c coeff x, with 2c = c_halves
            self.add_linear_raw(i, QuarterInt::from_int(weight * (ci * ci - c_halves * ci)));
        }
        for (k, &(i, ci)) in vars.iter().enumerate() {
            for &(j, cj) in &vars[k + 1..] {
                self.add_quadratic_raw(i, j, QuarterInt::from_int(weight * 2 * ci * cj));
            }
        }
        Ok(())
    }

    /// Exact energy of a full assignment.
    pub fn energy(&self, bits: &[bool]) -> Result<QuarterInt, QuboError> {
        if bits.len() != self.num_vars {
            return Err(QuboError::AssignmentLength {
                got: bits.len(),
                expected: self.num_vars,
            });
        }
        let mut total = self.offset;
        for (&i, &a) in &self.linear {
            if bits[i] {
                total += a;
            }
        }
        for (&(i, j), &b) in &self.quadratic {
            if bits[i] && bits[j] {
                total += b;
            }
        }
        Ok(total)
    }

    /// Random model for solver and serialization tests; coefficients are
    /// quarter-integers in [-4, 4].
    pub fn random<R: rand::Rng>(num_vars: usize, density: f64, rng: &mut R) -> Qubo {
        let mut q = Qubo::new(num_vars);
        q.add_offset(QuarterInt::from_quarters(rng.gen_range(-16..=16)));
        for i in 0..num_vars {
            if rng.gen_bool(density) {
                q.add_linear_raw(i, QuarterInt::from_quarters(rng.gen_range(-16..=16)));
            }
            for j in (i + 1)..num_vars {
                if rng.gen_bool(density) {
                    q.add_quadratic_raw(i, j, QuarterInt::from_quarters(rng.gen_range(-16..=16)));
                }
            }
        }
        q
    }

    /// Serializes to the line-oriented `QUBO` text format. All values are
    /// quarter-unit numerators; keys are emitted in ascending order so the
    /// output is canonical.
    pub fn export(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("QUBO {}\n", self.num_vars));
        if !self.offset.is_zero() {
            out.push_str(&format!("C {}\n", self.offset.quarters()));
        }
        for (&i, &a) in &self.linear {
            out.push_str(&format!("L {} {}\n", i, a.quarters()));
        }
        for (&(i, j), &b) in &self.quadratic {
            out.push_str(&format!("Q {} {} {}\n", i, j, b.quarters()));
        }
        out
    }

    /// Parses the `QUBO` text format. Rejects anything non-canonical:
    /// diagonal or out-of-range indices, duplicate keys, zero coefficients.
    pub fn import(text: &str) -> Result<Qubo, QuboError> {
        let err = |line: usize, message: String| QuboError::Parse { line, message };
        let mut q: Option<Qubo> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_i64 = |s: &str| {
                s.parse::<i64>()
                    .map_err(|_| err(line_no, format!("bad integer `{s}`")))
            };
            let parse_usize = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(line_no, format!("bad index `{s}`")))
            };
            match (q.as_mut(), fields.as_slice()) {
                (None, ["QUBO", n]) => {
                    q = Some(Qubo::new(parse_usize(n)?));
                }
                (None, _) => {
                    return Err(err(line_no, "expected `QUBO <num_vars>` header".into()));
                }
                (Some(_), ["QUBO", ..]) => {
                    return Err(err(line_no, "duplicate QUBO header".into()));
                }
                (Some(q), ["C", n]) => {
                    if !q.offset.is_zero() {
                        return Err(err(line_no, "duplicate C line".into()));
                    }
                    let v = parse_i64(n)?;
                    if v == 0 {
                        return Err(err(line_no, "zero coefficient".into()));
                    }
                    q.offset = QuarterInt::from_quarters(v);
                }
                (Some(q), ["L", i, n]) => {
                    let i = parse_usize(i)?;
                    q.check_var(i)
                        .map_err(|e| err(line_no, e.to_string()))?;
                    if q.linear.contains_key(&i) {
                        return Err(err(line_no, format!("duplicate L {i}")));
                    }
                    let v = parse_i64(n)?;
                    if v == 0 {
                        return Err(err(line_no, "zero coefficient".into()));
                    }
                    q.linear.insert(i, QuarterInt::from_quarters(v));
                }
                (Some(q), ["Q", i, j, n]) => {
                    let i = parse_usize(i)?;
                    let j = parse_usize(j)?;
                    if i == j {
                        return Err(err(line_no, format!("diagonal entry Q {i} {i}")));
                    }
                    if i > j {
                        return Err(err(line_no, format!("indices not ascending: Q {i} {j}")));
                    }
                    q.check_var(j)
                        .map_err(|e| err(line_no, e.to_string()))?;
                    if q.quadratic.contains_key(&(i, j)) {
                        return Err(err(line_no, format!("duplicate Q {i} {j}")));
                    }
                    let v = parse_i64(n)?;
                    if v == 0 {
                        return Err(err(line_no, "zero coefficient".into()));
                    }
                    q.quadratic.insert((i, j), QuarterInt::from_quarters(v));
                }
                (Some(_), _) => {
                    return Err(err(line_no, format!("unrecognized line `{line}`")));
                }
            }
        }
        q.ok_or_else(|| err(0, "empty document".into()))
    }
}
