//! Exterior algebra over a mixed set of vector and covector generators, with
//! polynomial coefficients.

use crate::scalar::parse::{Builder, Parser};
use crate::scalar::{Ctx, GaussRational, Poly, ScalarError};
use num::{BigInt, BigRational};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExteriorError {
    #[error("elements use different generator sets")]
    GeneratorMismatch,
    #[error("generator '{0}' has no pairing partner")]
    NoPartner(String),
    #[error("expected a vector combination")]
    NotVector,
    #[error("expected a covector combination")]
    NotCovector,
    #[error("expected a homogeneous element of degree 2")]
    NotDegreeTwo,
    #[error("expected a form (covector generators only)")]
    NotAForm,
    #[error("duplicate generator name '{0}'")]
    DuplicateName(String),
    #[error("at most 64 generators are supported")]
    TooManyGenerators,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Vector,
    Covector,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub kind: Kind,
    /// Index of the generator this one pairs with, to value 1.
    pub partner: Option<usize>,
    /// For a coordinate differential `dx`, the index of `x` in the context.
    pub coord: Option<usize>,
}

/// Ordered generators with a partial duality pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    ctx: Ctx,
    gens: Vec<Generator>,
}

pub type Gens = Arc<GeneratorSet>;

pub struct GensBuilder {
    ctx: Ctx,
    gens: Vec<Generator>,
}

impl GensBuilder {
    fn push(&mut self, name: String, kind: Kind, coord: Option<usize>) -> usize {
        self.gens.push(Generator { name, kind, partner: None, coord });
        self.gens.len() - 1
    }

    /// A vector generator and its dual covector.
    pub fn pair(mut self, vector: &str, covector: &str) -> Self {
        let v = self.push(vector.into(), Kind::Vector, None);
        let c = self.push(covector.into(), Kind::Covector, None);
        self.gens[v].partner = Some(c);
        self.gens[c].partner = Some(v);
        self
    }

    /// The differential `d<name>` of a context coordinate together with the
    /// coordinate vector field `p<name>`.
    pub fn coordinate(mut self, name: &str) -> Result<Self, ExteriorError> {
        let idx = self.ctx.var_index(name).ok_or_else(|| ScalarError::UnknownVariable(name.into()))?;
        let v = self.push(format!("p{name}"), Kind::Vector, None);
        let c = self.push(format!("d{name}"), Kind::Covector, Some(idx));
        self.gens[v].partner = Some(c);
        self.gens[c].partner = Some(v);
        Ok(self)
    }

    /// A covector differential `d<name>` for a coordinate outside the context.
    /// Its coefficients never depend on that coordinate.
    pub fn external_differential(mut self, name: &str) -> Self {
        self.push(format!("d{name}"), Kind::Covector, None);
        self
    }

    pub fn build(self) -> Result<Gens, ExteriorError> {
        if self.gens.len() > 64 {
            return Err(ExteriorError::TooManyGenerators);
        }
        let mut seen = std::collections::HashSet::new();
        for g in &self.gens {
            if !seen.insert(g.name.clone()) || self.ctx.var_index(&g.name).is_some() {
                return Err(ExteriorError::DuplicateName(g.name.clone()));
            }
        }
        Ok(Arc::new(GeneratorSet { ctx: self.ctx, gens: self.gens }))
    }
}

impl GeneratorSet {
    pub fn builder(ctx: &Ctx) -> GensBuilder {
        GensBuilder { ctx: ctx.clone(), gens: Vec::new() }
    }

    /// Vector/covector pairs named `prefix_v{k}` and `prefix_c{k}`.
    pub fn frame(ctx: &Ctx, vec_names: &[String], covec_names: &[String]) -> Result<Gens, ExteriorError> {
        let mut b = GeneratorSet::builder(ctx);
        for (v, c) in vec_names.iter().zip(covec_names) {
            b = b.pair(v, c);
        }
        b.build()
    }

    /// Differentials of every context coordinate, with their vector fields.
    pub fn coordinates(ctx: &Ctx) -> Result<Gens, ExteriorError> {
        let mut b = GeneratorSet::builder(ctx);
        for idx in 0..ctx.n_vars() {
            b = b.coordinate(ctx.var_name(idx))?;
        }
        b.build()
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, idx: usize) -> &Generator {
        &self.gens[idx]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }
}

fn same_gens(a: &Gens, b: &Gens) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A subset of generators, stored as a bit set (sorted by index).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Blade(pub u64);

impl Blade {
    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|k| self.0 >> k & 1 == 1).collect()
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    pub fn from_indices(idx: &[usize]) -> Blade {
        Blade(idx.iter().fold(0u64, |acc, &k| acc | 1 << k))
    }
}

impl Ord for Blade {
    /// Degree first, then the sorted index lists lexicographically.
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.indices().cmp(&o.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sign of the product `a ^ b` of two disjoint blades, rewritten in sorted order.
fn merge_sign(a: u64, b: u64) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let k = rest.trailing_zeros();
        swaps += (a >> k >> 1).count_ones();
        rest &= rest - 1;
    }
    swaps % 2 == 1
}

#[derive(Clone)]
pub struct GradedElement {
    gens: Gens,
    terms: BTreeMap<Blade, Poly>,
}

impl PartialEq for GradedElement {
    fn eq(&self, o: &Self) -> bool {
        same_gens(&self.gens, &o.gens) && self.terms == o.terms
    }
}

impl GradedElement {
    pub fn zero(gens: &Gens) -> Self {
        GradedElement { gens: gens.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(gens: &Gens, p: Poly) -> Self {
        let mut e = GradedElement::zero(gens);
        e.add_term(Blade(0), p);
        e
    }

    pub fn one(gens: &Gens) -> Self {
        GradedElement::scalar(gens, Poly::one(gens.ctx()))
    }

    pub fn constant(gens: &Gens, c: GaussRational) -> Self {
        GradedElement::scalar(gens, Poly::constant(gens.ctx(), c))
    }

    pub fn generator(gens: &Gens, idx: usize) -> Self {
        let mut e = GradedElement::zero(gens);
        e.add_term(Blade(1 << idx), Poly::one(gens.ctx()));
        e
    }

    pub fn named(gens: &Gens, name: &str) -> Option<Self> {
        gens.index(name).map(|k| GradedElement::generator(gens, k))
    }

    /// `coeff` times the wedge of the listed generators, in the listed order.
    pub fn monomial(gens: &Gens, coeff: Poly, idx: &[usize]) -> Self {
        let mut e = GradedElement::scalar(gens, coeff);
        for &k in idx {
            e = e.wedge(&GradedElement::generator(gens, k)).unwrap();
        }
        e
    }

    pub fn gens(&self) -> &Gens {
        &self.gens
    }

    pub fn ctx(&self) -> &Ctx {
        self.gens.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Poly)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, b: Blade) -> Poly {
        self.terms.get(&b).cloned().unwrap_or_else(|| Poly::zero(self.ctx()))
    }

    pub fn add_term(&mut self, b: Blade, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(old) => {
                let s = &*old + &p;
                if s.is_zero() {
                    self.terms.remove(&b);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(b, p);
            }
        }
    }

    fn check(&self, o: &Self) -> Result<(), ExteriorError> {
        if same_gens(&self.gens, &o.gens) {
            Ok(())
        } else {
            Err(ExteriorError::GeneratorMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, ExteriorError> {
        self.check(o)?;
        let mut r = self.clone();
        for (b, p) in &o.terms {
            r.add_term(*b, p.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, ExteriorError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Poly::int(self.ctx(), -1))
    }

    pub fn scale(&self, p: &Poly) -> Self {
        let mut r = GradedElement::zero(&self.gens);
        for (b, c) in &self.terms {
            r.add_term(*b, c * p);
        }
        r
    }

    pub fn scale_const(&self, c: &GaussRational) -> Self {
        self.scale(&Poly::constant(self.ctx(), c.clone()))
    }

    /// Exterior product with the Koszul sign.
    pub fn wedge(&self, o: &Self) -> Result<Self, ExteriorError> {
        self.check(o)?;
        let mut r = GradedElement::zero(&self.gens);
        for (a, pa) in &self.terms {
            for (b, pb) in &o.terms {
                if a.0 & b.0 != 0 {
                    continue;
                }
                let c = pa * pb;
                let c = if merge_sign(a.0, b.0) { -c } else { c };
                r.add_term(Blade(a.0 | b.0), c);
            }
        }
        Ok(r)
    }

    /// Contraction by the single generator `g` (through its partner).
    pub fn contract_gen(&self, g: usize) -> Result<Self, ExteriorError> {
        let gen = self.gens.get(g);
        let p = gen.partner.ok_or_else(|| ExteriorError::NoPartner(gen.name.clone()))?;
        let mut r = GradedElement::zero(&self.gens);
        for (b, c) in &self.terms {
            if !b.contains(p) {
                continue;
            }
            let before = (b.0 & ((1u64 << p) - 1)).count_ones();
            let c = if before % 2 == 1 { -c } else { c.clone() };
            r.add_term(Blade(b.0 & !(1 << p)), c);
        }
        Ok(r)
    }

    /// Contraction `iota_u` by a degree-one combination `u`.
    pub fn contract(&self, u: &Self) -> Result<Self, ExteriorError> {
        self.check(u)?;
        let mut r = GradedElement::zero(&self.gens);
        for (b, c) in &u.terms {
            if b.degree() != 1 {
                return Err(ExteriorError::NotVector);
            }
            let g = b.0.trailing_zeros() as usize;
            r = r.add(&self.contract_gen(g)?.scale(c))?;
        }
        Ok(r)
    }

    pub fn is_homogeneous(&self, deg: u32) -> bool {
        self.terms.keys().all(|b| b.degree() == deg)
    }

    pub fn degree_part(&self, deg: u32) -> Self {
        let mut r = GradedElement::zero(&self.gens);
        for (b, c) in &self.terms {
            if b.degree() == deg {
                r.add_term(*b, c.clone());
            }
        }
        r
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|b| b.degree()).max().unwrap_or(0)
    }

    fn uses_only(&self, kind: Kind) -> bool {
        self.terms.keys().all(|b| b.indices().iter().all(|&k| self.gens.get(k).kind == kind))
    }

    pub fn is_form(&self) -> bool {
        self.uses_only(Kind::Covector)
    }

    pub fn is_multivector(&self) -> bool {
        self.uses_only(Kind::Vector)
    }

    /// `exp(B) = 1 + B + B^B/2! + ...` for homogeneous degree-2 `B`.
    pub fn exp(&self) -> Result<Self, ExteriorError> {
        if !self.is_homogeneous(2) {
            return Err(ExteriorError::NotDegreeTwo);
        }
        let mut acc = GradedElement::one(&self.gens);
        let mut pow = GradedElement::one(&self.gens);
        let mut k = 1i64;
        loop {
            pow = pow.wedge(self)?;
            if pow.is_zero() {
                return Ok(acc);
            }
            let inv = GaussRational::real(BigRational::new(BigInt::from(1), factorial(k)));
            acc = acc.add(&pow.scale_const(&inv))?;
            k += 1;
        }
    }

    /// The Clifford action `iota_v phi + alpha ^ phi` on a form.
    pub fn clifford_act(&self, v: &Self, alpha: &Self) -> Result<Self, ExteriorError> {
        if !self.is_form() {
            return Err(ExteriorError::NotAForm);
        }
        if !(v.is_multivector() && v.is_homogeneous(1)) {
            return Err(ExteriorError::NotVector);
        }
        if !(alpha.is_form() && alpha.is_homogeneous(1)) {
            return Err(ExteriorError::NotCovector);
        }
        self.contract(v)?.add(&alpha.wedge(self)?)
    }

    /// The de Rham differential. Frame covectors without a coordinate are closed.
    pub fn d(&self) -> Result<Self, ExteriorError> {
        if !self.is_form() {
            return Err(ExteriorError::NotAForm);
        }
        let mut r = GradedElement::zero(&self.gens);
        for (k, g) in self.gens.generators().iter().enumerate() {
            let Some(var) = g.coord else { continue };
            let dg = GradedElement::generator(&self.gens, k);
            let mut partial = GradedElement::zero(&self.gens);
            for (b, c) in &self.terms {
                partial.add_term(*b, c.partial(var));
            }
            r = r.add(&dg.wedge(&partial)?)?;
        }
        Ok(r)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut r = GradedElement::zero(&self.gens);
        for (b, c) in &self.terms {
            r.add_term(*b, f(c));
        }
        r
    }

    /// Re-expresses the element over another generator set by generator name.
    pub fn transfer(&self, target: &Gens) -> Result<Self, ExteriorError> {
        let mut r = GradedElement::zero(target);
        for (b, c) in &self.terms {
            let mut idx = Vec::new();
            for k in b.indices() {
                let name = &self.gens.get(k).name;
                idx.push(target.index(name).ok_or_else(|| ExteriorError::NoPartner(name.clone()))?);
            }
            let c = c.transfer(target.ctx())?;
            r = r.add(&GradedElement::monomial(target, c, &idx))?;
        }
        Ok(r)
    }

    pub fn to_canonical(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (b, c)) in self.terms.iter().enumerate() {
            let wedge: Vec<&str> = b.indices().iter().map(|&g| self.gens.get(g).name.as_str()).collect();
            let wedge = wedge.join("^");
            let (neg, body) = if c.n_terms() == 1 {
                let (_, lc) = c.terms().next().unwrap();
                let neg = lc.re < BigRational::from_integer(0.into())
                    || (lc.re == BigRational::from_integer(0.into()) && lc.im < BigRational::from_integer(0.into()));
                let mag = if neg { -c } else { c.clone() };
                let body = if wedge.is_empty() {
                    mag.to_canonical()
                } else if mag.is_one() {
                    wedge.clone()
                } else {
                    format!("{}*{}", mag.to_canonical(), wedge)
                };
                (neg, body)
            } else if wedge.is_empty() {
                (false, format!("({})", c.to_canonical()))
            } else {
                (false, format!("({})*{}", c.to_canonical(), wedge))
            };
            match (k == 0, neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }

    pub fn parse(gens: &Gens, src: &str) -> Result<Self, ExteriorError> {
        Ok(Parser::parse(src, &FormBuilder { gens })?)
    }
}

fn factorial(k: i64) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, v| acc * BigInt::from(v))
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graded({})", self.to_canonical())
    }
}

struct FormBuilder<'a> {
    gens: &'a Gens,
}

impl Builder for FormBuilder<'_> {
    type Out = GradedElement;

    fn constant(&self, c: GaussRational) -> GradedElement {
        GradedElement::constant(self.gens, c)
    }

    fn name(&self, name: &str) -> Option<GradedElement> {
        if let Some(e) = GradedElement::named(self.gens, name) {
            return Some(e);
        }
        let ctx = self.gens.ctx();
        if name == "varpi" {
            return Some(GradedElement::scalar(self.gens, Poly::varpi(ctx)));
        }
        Poly::var_named(ctx, name).ok().map(|p| GradedElement::scalar(self.gens, p))
    }

    fn mode(&self, m: Vec<i64>) -> Result<GradedElement, String> {
        Poly::mode(self.gens.ctx(), m)
            .map(|p| GradedElement::scalar(self.gens, p))
            .map_err(|e| e.to_string())
    }

    fn add(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        a.add(b).unwrap()
    }

    fn neg(&self, a: &GradedElement) -> GradedElement {
        a.neg()
    }

    fn mul(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        a.wedge(b).unwrap()
    }

    fn as_constant(&self, a: &GradedElement) -> Option<GaussRational> {
        if a.is_zero() {
            return Some(GaussRational::zero());
        }
        if a.n_terms() == 1 {
            let (b, c) = a.terms().next().unwrap();
            if b.degree() == 0 {
                return c.as_constant();
            }
        }
        None
    }

    fn call(&self, func: &str, arg: &GradedElement) -> Result<GradedElement, String> {
        match func {
            "exp" => arg.exp().map_err(|e| e.to_string()),
            _ => Err(format!("unknown function '{func}'")),
        }
    }

    fn caret_product(&self) -> bool {
        true
    }
}

/// Compares two elements up to a nonzero constant factor. Returns the factor
/// `c` with `a = c * b` when it exists.
pub fn proportionality(a: &GradedElement, b: &GradedElement) -> Option<GaussRational> {
    if a.is_zero() || b.is_zero() || !same_gens(&a.gens, &b.gens) {
        return None;
    }
    let (blade, bc) = b.terms.iter().next()?;
    let ac = a.terms.get(blade)?;
    let bc = bc.as_constant()?;
    let ac = ac.as_constant()?;
    let c = &ac / &bc;
    (a == &b.scale_const(&c)).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Context;
    use proptest::prelude::*;

    fn xyz() -> Gens {
        let ctx = Context::new(vec!["x".into(), "y".into(), "z".into()], vec![], false).unwrap();
        GeneratorSet::coordinates(&ctx).unwrap()
    }

    fn f(g: &Gens, s: &str) -> GradedElement {
        GradedElement::parse(g, s).unwrap()
    }

    #[test]
    fn wedge_basics() {
        let g = xyz();
        assert!(f(&g, "dx^dx").is_zero());
        assert_eq!(f(&g, "dx^dy"), f(&g, "dy^dx").neg());
        // distributivity oracle: (1 + dx)(1 + dy) = 1 + dx + dy + dx dy
        let lhs = f(&g, "1 + dx").wedge(&f(&g, "1 + dy")).unwrap();
        let mut rhs = GradedElement::one(&g);
        for t in [f(&g, "dx"), f(&g, "dy"), f(&g, "dx^dy")] {
            rhs = rhs.add(&t).unwrap();
        }
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_canonical(), "1 + dx + dy + dx^dy");
    }

    #[test]
    fn contraction_examples() {
        let g = xyz();
        let px = f(&g, "px");
        assert_eq!(f(&g, "dx^dy").contract(&px).unwrap(), f(&g, "dy"));
        assert!(f(&g, "dy").contract(&px).unwrap().is_zero());
        assert_eq!(f(&g, "x*dx^dy + dy^dz").contract(&px).unwrap(), f(&g, "x*dy"));
        assert_eq!(f(&g, "dy^dx").contract(&px).unwrap(), f(&g, "-dy"));
    }

    #[test]
    fn exp_examples() {
        let ctx = Context::standard(4, 0, false);
        let g = GeneratorSet::coordinates(&ctx).unwrap();
        assert_eq!(f(&g, "dx1^dx2").exp().unwrap(), f(&g, "1 + dx1^dx2"));
        assert_eq!(f(&g, "-i*dx1^dx2").exp().unwrap(), f(&g, "1 - i*dx1^dx2"));
        // series oracle: B^B/2 = dx1 dx2 dx3 dx4 since the cross terms agree
        let b = f(&g, "dx1^dx2 + dx3^dx4");
        let b2 = b.wedge(&b).unwrap().scale_const(&GaussRational::from_frac(1, 2));
        assert_eq!(b2, f(&g, "dx1^dx2^dx3^dx4"));
        assert_eq!(b.exp().unwrap(), f(&g, "1 + dx1^dx2 + dx3^dx4 + dx1^dx2^dx3^dx4"));
        assert_eq!(f(&g, "dx1").exp(), Err(ExteriorError::NotDegreeTwo));
    }

    #[test]
    fn clifford_examples() {
        let g = xyz();
        let zero = GradedElement::zero(&g);
        assert_eq!(f(&g, "dx").clifford_act(&f(&g, "px"), &zero).unwrap(), GradedElement::one(&g));
        assert_eq!(GradedElement::one(&g).clifford_act(&zero, &f(&g, "dx")).unwrap(), f(&g, "dx"));
        // u.u.phi = dx(px) phi with the unnormalized pairing
        let phi = f(&g, "3 + y*dy + dx^dz - dx^dy^dz");
        let once = phi.clifford_act(&f(&g, "px"), &f(&g, "dx")).unwrap();
        let twice = once.clifford_act(&f(&g, "px"), &f(&g, "dx")).unwrap();
        assert_eq!(twice, phi);
    }

    #[test]
    fn de_rham_examples() {
        let g = xyz();
        assert_eq!(f(&g, "x*dy").d().unwrap(), f(&g, "dx^dy"));
        assert!(f(&g, "dx^dy").d().unwrap().is_zero());
        assert_eq!(f(&g, "z*dx^dy").d().unwrap(), f(&g, "dz^dx^dy"));
        assert_eq!(f(&g, "px").d(), Err(ExteriorError::NotAForm));
    }

    #[test]
    fn mode_differential() {
        let ctx = Context::standard(1, 1, true);
        let g = GeneratorSet::coordinates(&ctx).unwrap();
        assert_eq!(f(&g, "E[2]*dx1").d().unwrap(), f(&g, "2*varpi*E[2]*dxi1^dx1"));
    }

    #[test]
    fn canonical_text_roundtrip() {
        let g = xyz();
        let e = f(&g, "-(1/2)*x*dx^dz + (x + y)*dy - 3 + i*dz");
        let s = e.to_canonical();
        assert_eq!(s, "-3 + (x + y)*dy + i*dz - (1/2)*x*dx^dz");
        assert_eq!(f(&g, &s), e);
    }

    fn arb_form(g: Gens) -> impl Strategy<Value = GradedElement> {
        proptest::collection::vec((0u64..8, -3i64..4, 0u32..2, 0u32..2), 0..6).prop_map(move |ts| {
            let ctx = g.ctx().clone();
            let mut e = GradedElement::zero(&g);
            for (mask, c, ex, ey) in ts {
                // covectors sit at odd positions in the coordinate generator set
                let bits = (0..3).filter(|k| mask >> k & 1 == 1).fold(0u64, |a, k| a | 1 << (2 * k + 1));
                let coeff = &Poly::var(&ctx, 0).pow(ex) * &Poly::var(&ctx, 1).pow(ey);
                e.add_term(Blade(bits), coeff.scale_int(c));
            }
            e
        })
    }

    fn homogeneous(e: &GradedElement, deg: u32) -> GradedElement {
        e.degree_part(deg)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn d_squared_vanishes(a in arb_form(xyz())) {
            prop_assert!(a.d().unwrap().d().unwrap().is_zero());
        }

        #[test]
        fn contraction_is_nilpotent(a in arb_form(xyz()), k in 0usize..3) {
            let g = xyz();
            let u = GradedElement::generator(&g, 2 * k);
            prop_assert!(a.contract(&u).unwrap().contract(&u).unwrap().is_zero());
        }

        #[test]
        fn koszul_symmetry(a in arb_form(xyz()), b in arb_form(xyz()), p in 0u32..4, q in 0u32..4) {
            let (a, b) = (homogeneous(&a, p), homogeneous(&b, q));
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            prop_assert_eq!(ab, if (p * q) % 2 == 1 { ba.neg() } else { ba });
        }

        #[test]
        fn contraction_is_a_derivation(a in arb_form(xyz()), b in arb_form(xyz()), p in 0u32..4, k in 0usize..3) {
            let g = xyz();
            let a = homogeneous(&a, p);
            let u = GradedElement::generator(&g, 2 * k);
            let lhs = a.wedge(&b).unwrap().contract(&u).unwrap();
            let t1 = a.contract(&u).unwrap().wedge(&b).unwrap();
            let t2 = a.wedge(&b.contract(&u).unwrap()).unwrap();
            let rhs = if p % 2 == 1 { t1.sub(&t2).unwrap() } else { t1.add(&t2).unwrap() };
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn d_leibniz(a in arb_form(xyz()), b in arb_form(xyz()), p in 0u32..4) {
            let a = homogeneous(&a, p);
            let lhs = a.wedge(&b).unwrap().d().unwrap();
            let t1 = a.d().unwrap().wedge(&b).unwrap();
            let t2 = a.wedge(&b.d().unwrap()).unwrap();
            let rhs = if p % 2 == 1 { t1.sub(&t2).unwrap() } else { t1.add(&t2).unwrap() };
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn text_roundtrip(a in arb_form(xyz())) {
            let g = xyz();
            let s = a.to_canonical();
            let back = GradedElement::parse(&g, &s).unwrap();
            prop_assert_eq!(back.to_canonical(), s);
            prop_assert_eq!(back, a);
        }
    }
}
