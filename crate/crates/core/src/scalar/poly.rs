//! Multivariate polynomials over Gaussian rationals, with optional fiber
//! Fourier modes `e^{2 pi i m.xi}` and the formal symbol `varpi = 2 pi i`.

use super::gauss::{write_coeff, GaussRational};
use super::ScalarError;
use num::{BigInt, BigRational, Integer, One, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// Ordered coordinate names. Base coordinates come first, then fiber ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    base: Vec<String>,
    fiber: Vec<String>,
    periodic: bool,
}

pub type Ctx = Arc<Context>;

const RESERVED: &[&str] = &["i", "E", "varpi", "exp"];

impl Context {
    pub fn new(base: Vec<String>, fiber: Vec<String>, periodic: bool) -> Result<Ctx, ScalarError> {
        let mut seen = std::collections::HashSet::new();
        for name in base.iter().chain(fiber.iter()) {
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || RESERVED.contains(&name.as_str()) {
                return Err(ScalarError::BadName(name.clone()));
            }
            if !seen.insert(name.clone()) {
                return Err(ScalarError::BadName(name.clone()));
            }
        }
        Ok(Arc::new(Context { base, fiber, periodic }))
    }

    /// Base coordinates `x1..xn`, fiber coordinates `xi1..xik`.
    pub fn standard(n_base: usize, n_fiber: usize, periodic: bool) -> Ctx {
        let base = (1..=n_base).map(|k| format!("x{k}")).collect();
        let fiber = (1..=n_fiber).map(|k| format!("xi{k}")).collect();
        Context::new(base, fiber, periodic).expect("standard names are valid")
    }

    pub fn n_base(&self) -> usize {
        self.base.len()
    }

    pub fn n_fiber(&self) -> usize {
        self.fiber.len()
    }

    pub fn n_vars(&self) -> usize {
        self.base.len() + self.fiber.len()
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn fiber_names(&self) -> &[String] {
        &self.fiber
    }

    pub fn var_name(&self, idx: usize) -> &str {
        if idx < self.base.len() {
            &self.base[idx]
        } else {
            &self.fiber[idx - self.base.len()]
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.base
            .iter()
            .chain(self.fiber.iter())
            .position(|n| n == name)
    }

    pub fn is_fiber(&self, idx: usize) -> bool {
        idx >= self.base.len() && idx < self.n_vars()
    }
}

/// Exponent data of one term.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    /// Polynomial exponents, base variables then fiber variables.
    pub exps: Vec<u32>,
    /// Fourier mode vector over the fiber coordinates.
    pub modes: Vec<i64>,
    /// Power of `varpi`.
    pub varpi: u32,
}

impl Monomial {
    pub fn one(ctx: &Context) -> Self {
        Monomial { exps: vec![0; ctx.n_vars()], modes: vec![0; ctx.n_fiber()], varpi: 0 }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.varpi == 0 && self.exps.iter().all(|&e| e == 0) && self.modes.iter().all(|&m| m == 0)
    }

    pub fn has_modes(&self) -> bool {
        self.modes.iter().any(|&m| m != 0)
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect(),
            modes: self.modes.iter().zip(&o.modes).map(|(a, b)| a + b).collect(),
            varpi: self.varpi + o.varpi,
        }
    }

    /// `self / o` if the quotient has non-negative exponents. Modes always divide.
    fn div(&self, o: &Monomial) -> Option<Monomial> {
        if self.varpi < o.varpi || self.exps.iter().zip(&o.exps).any(|(a, b)| a < b) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a - b).collect(),
            modes: self.modes.iter().zip(&o.modes).map(|(a, b)| a - b).collect(),
            varpi: self.varpi - o.varpi,
        })
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree, then exponents, then modes, then `varpi`.
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.exps.cmp(&o.exps))
            .then_with(|| self.modes.cmp(&o.modes))
            .then_with(|| self.varpi.cmp(&o.varpi))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone)]
pub struct Poly {
    ctx: Ctx,
    terms: BTreeMap<Monomial, GaussRational>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Self) -> bool {
        same_ctx(&self.ctx, &o.ctx) && self.terms == o.terms
    }
}

impl Eq for Poly {}

pub(crate) fn same_ctx(a: &Ctx, b: &Ctx) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Poly {
    pub fn zero(ctx: &Ctx) -> Self {
        Poly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Poly::constant(ctx, GaussRational::one())
    }

    pub fn constant(ctx: &Ctx, c: GaussRational) -> Self {
        let mut p = Poly::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx), c);
        }
        p
    }

    pub fn int(ctx: &Ctx, n: i64) -> Self {
        Poly::constant(ctx, GaussRational::from_int(n))
    }

    pub fn i(ctx: &Ctx) -> Self {
        Poly::constant(ctx, GaussRational::i())
    }

    /// The coordinate with index `idx` (base first, then fiber).
    pub fn var(ctx: &Ctx, idx: usize) -> Self {
        let mut m = Monomial::one(ctx);
        m.exps[idx] = 1;
        Poly::from_term(ctx, m, GaussRational::one())
    }

    pub fn var_named(ctx: &Ctx, name: &str) -> Result<Self, ScalarError> {
        ctx.var_index(name)
            .map(|i| Poly::var(ctx, i))
            .ok_or_else(|| ScalarError::UnknownVariable(name.to_string()))
    }

    /// The mode `e^{2 pi i m.xi}`; only legal in periodic contexts.
    pub fn mode(ctx: &Ctx, m: Vec<i64>) -> Result<Self, ScalarError> {
        if m.len() != ctx.n_fiber() {
            return Err(ScalarError::ModeLength { expected: ctx.n_fiber(), got: m.len() });
        }
        if m.iter().any(|&k| k != 0) && !ctx.periodic() {
            return Err(ScalarError::ModesNotAllowed);
        }
        let mut mono = Monomial::one(ctx);
        mono.modes = m;
        Ok(Poly::from_term(ctx, mono, GaussRational::one()))
    }

    pub fn varpi(ctx: &Ctx) -> Self {
        let mut m = Monomial::one(ctx);
        m.varpi = 1;
        Poly::from_term(ctx, m, GaussRational::one())
    }

    pub fn from_term(ctx: &Ctx, m: Monomial, c: GaussRational) -> Self {
        let mut p = Poly::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    /// The value if this polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(GaussRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn has_modes(&self) -> bool {
        self.terms.keys().any(|m| m.has_modes())
    }

    pub fn has_varpi(&self) -> bool {
        self.terms.keys().any(|m| m.varpi > 0)
    }

    /// True when no fiber coordinate or mode occurs.
    pub fn is_base_only(&self) -> bool {
        let nb = self.ctx.n_base();
        self.terms.keys().all(|m| !m.has_modes() && m.exps[nb..].iter().all(|&e| e == 0))
    }

    /// True when the variable with index `idx` occurs with positive exponent.
    pub fn uses_var(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.exps[idx] > 0)
    }

    fn check(&self, o: &Poly) -> Result<(), ScalarError> {
        if same_ctx(&self.ctx, &o.ctx) {
            Ok(())
        } else {
            Err(ScalarError::ContextMismatch)
        }
    }

    fn add_term(&mut self, m: Monomial, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, o: &Poly) -> Result<Poly, ScalarError> {
        self.check(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, o: &Poly) -> Result<Poly, ScalarError> {
        self.check(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        Ok(r)
    }

    pub fn try_mul(&self, o: &Poly) -> Result<Poly, ScalarError> {
        self.check(o)?;
        let mut r = Poly::zero(&self.ctx);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &GaussRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Poly {
        self.scale(&GaussRational::from_int(k))
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one(&self.ctx);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Complex conjugate of the coefficients. Modes and `varpi` are left alone,
    /// so this is only meaningful on mode-free, `varpi`-free polynomials.
    pub fn conj_coeffs(&self) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &GaussRational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if self.check(d).is_err() || d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero(&self.ctx));
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        // Quotient modes must lie in a bounded box, which keeps the loop finite
        // even though modes are units.
        let nf = self.ctx.n_fiber();
        let bounds: Vec<(i64, i64)> = (0..nf)
            .map(|j| {
                let fmin = self.terms.keys().map(|m| m.modes[j]).min().unwrap();
                let fmax = self.terms.keys().map(|m| m.modes[j]).max().unwrap();
                let dmin = d.terms.keys().map(|m| m.modes[j]).min().unwrap();
                let dmax = d.terms.keys().map(|m| m.modes[j]).max().unwrap();
                (fmin - dmax, fmax - dmin)
            })
            .collect();
        let (dm, dc) = d.leading().unwrap();
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut q = Poly::zero(&self.ctx);
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(dm)?;
            if qm.modes.iter().zip(&bounds).any(|(m, (lo, hi))| m < lo || m > hi) {
                return None;
            }
            let qc = rc * &dc_inv;
            let t = Poly::from_term(&self.ctx, qm, qc);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    /// Partial derivative in the variable with index `idx`. Fiber variables also
    /// act on modes: `d/dxi_j e^{2 pi i m.xi} = m_j varpi e^{2 pi i m.xi}`.
    pub fn partial(&self, idx: usize) -> Poly {
        let mut r = Poly::zero(&self.ctx);
        let fiber_slot = self.ctx.is_fiber(idx).then(|| idx - self.ctx.n_base());
        for (m, c) in &self.terms {
            let e = m.exps[idx];
            if e > 0 {
                let mut m2 = m.clone();
                m2.exps[idx] -= 1;
                r.add_term(m2, c.scale_int(e as i64));
            }
            if let Some(j) = fiber_slot {
                let k = m.modes[j];
                if k != 0 {
                    let mut m2 = m.clone();
                    m2.varpi += 1;
                    r.add_term(m2, c.scale_int(k));
                }
            }
        }
        r
    }

    pub fn partial_named(&self, name: &str) -> Result<Poly, ScalarError> {
        let idx = self
            .ctx
            .var_index(name)
            .ok_or_else(|| ScalarError::UnknownVariable(name.to_string()))?;
        Ok(self.partial(idx))
    }

    /// Exact value at a point. Fiber modes evaluate to 1 when `m.xi` is an
    /// integer and are rejected otherwise; `varpi` cannot be evaluated.
    pub fn evaluate(&self, point: &HashMap<String, GaussRational>) -> Result<GaussRational, ScalarError> {
        let ctx = &self.ctx;
        let mut vals = Vec::with_capacity(ctx.n_vars());
        for idx in 0..ctx.n_vars() {
            let name = ctx.var_name(idx);
            let needed = self.uses_var(idx)
                || (ctx.is_fiber(idx) && self.terms.keys().any(|m| m.modes[idx - ctx.n_base()] != 0));
            match point.get(name) {
                Some(v) => vals.push(Some(v.clone())),
                None if needed => return Err(ScalarError::Unassigned(name.to_string())),
                None => vals.push(None),
            }
        }
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            if m.varpi > 0 {
                return Err(ScalarError::NonEvaluable("varpi".into()));
            }
            if m.has_modes() {
                let mut phase = BigRational::zero();
                for (j, &k) in m.modes.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let v = vals[ctx.n_base() + j].as_ref().unwrap();
                    if !v.is_real() {
                        return Err(ScalarError::NonEvaluable(ctx.fiber_names()[j].clone()));
                    }
                    phase += &v.re * BigRational::from_integer(BigInt::from(k));
                }
                if !phase.denom().is_one() {
                    return Err(ScalarError::NonEvaluable("fiber mode".into()));
                }
            }
            let mut t = c.clone();
            for (idx, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    t = &t * vals[idx].as_ref().unwrap();
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitutes the given variables by constants (modes untouched).
    pub fn substitute(&self, values: &[(usize, GaussRational)]) -> Poly {
        let mut r = Poly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut c2 = c.clone();
            for (idx, v) in values {
                let e = m2.exps[*idx];
                for _ in 0..e {
                    c2 = &c2 * v;
                }
                m2.exps[*idx] = 0;
            }
            r.add_term(m2, c2);
        }
        r
    }

    /// Keeps only the terms whose mode vector is zero.
    pub fn mode_zero_part(&self) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.has_modes())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Moves the polynomial into another context by variable name. Fails if a
    /// used variable or a mode has no counterpart.
    pub fn transfer(&self, target: &Ctx) -> Result<Poly, ScalarError> {
        if same_ctx(&self.ctx, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> =
            (0..self.ctx.n_vars()).map(|i| target.var_index(self.ctx.var_name(i))).collect();
        let mut r = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = Monomial::one(target);
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    let j = map[i].ok_or_else(|| ScalarError::UnknownVariable(self.ctx.var_name(i).into()))?;
                    m2.exps[j] += e;
                }
            }
            if m.has_modes() {
                if target.n_fiber() != self.ctx.n_fiber() || !target.periodic() {
                    return Err(ScalarError::ModesNotAllowed);
                }
                m2.modes = m.modes.clone();
            }
            m2.varpi = m.varpi;
            r.add_term(m2, c.clone());
        }
        Ok(r)
    }

    /// Canonical text form: terms in descending graded-lex order.
    pub fn to_canonical(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.leading_negative();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors = self.factor_strings(m);
            if factors.is_empty() {
                write_coeff(&mut out, &mag, false);
            } else {
                let before = out.len();
                write_coeff(&mut out, &mag, true);
                if out.len() > before {
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    fn factor_strings(&self, m: &Monomial) -> Vec<String> {
        let mut f = Vec::new();
        match m.varpi {
            0 => {}
            1 => f.push("varpi".to_string()),
            k => f.push(format!("varpi^{k}")),
        }
        for (idx, &e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => f.push(self.ctx.var_name(idx).to_string()),
                _ => f.push(format!("{}^{}", self.ctx.var_name(idx), e)),
            }
        }
        if m.has_modes() {
            let parts: Vec<String> = m.modes.iter().map(|k| k.to_string()).collect();
            f.push(format!("E[{}]", parts.join(",")));
        }
        f
    }

    /// Least common multiple of all coefficient denominators (real and imaginary).
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.re.denom());
            l = l.lcm(c.im.denom());
        }
        l
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_canonical())
    }
}

// Operator forms panic on a context mismatch; use the `try_` methods for
// fallible arithmetic.
impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        self.try_add(o).expect("polynomial context mismatch")
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.try_sub(o).expect("polynomial context mismatch")
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.try_mul(o).expect("polynomial context mismatch")
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&GaussRational::from_int(-1))
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
        impl std::ops::$tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
