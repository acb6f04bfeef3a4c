//! Linear generalized complex structures on `W + W^*`, stored as four blocks
//! acting on column vectors `(v; xi)`.

use crate::exterior::{Blade, ExteriorError, GeneratorSet, Gens, GradedElement};
use crate::matrix::{ConstMatrix, PolyMatrix};
use crate::report::Report;
use crate::scalar::{Ctx, GaussRational, Poly};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GcsError {
    #[error("blocks must be square of a common size")]
    Shape,
    #[error("blocks belong to different coordinate contexts")]
    ContextMismatch,
    #[error("J does not square to -1")]
    NotComplex,
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("matrix is not invertible over the coefficient ring")]
    Singular,
    #[error("structure has non-constant entries")]
    NotConstant,
    #[error("+i eigenspace has dimension {got}, expected {expected}")]
    EigenDimension { expected: usize, got: usize },
    #[error("eigenspace is not maximal isotropic and transverse")]
    NotTransverse,
    #[error("annihilator has dimension {0}, expected 1")]
    AnnihilatorDimension(usize),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GCStructure {
    j1: PolyMatrix,
    j2: PolyMatrix,
    j3: PolyMatrix,
    j4: PolyMatrix,
}

impl GCStructure {
    /// Blocks `J1: W -> W`, `J2: W^* -> W`, `J3: W -> W^*`, `J4: W^* -> W^*`.
    /// Only shapes are checked here; see [`GCStructure::validate`].
    pub fn new(j1: PolyMatrix, j2: PolyMatrix, j3: PolyMatrix, j4: PolyMatrix) -> Result<Self, GcsError> {
        let m = j1.rows();
        if [&j1, &j2, &j3, &j4].iter().any(|b| b.rows() != m || b.cols() != m) {
            return Err(GcsError::Shape);
        }
        if ![&j2, &j3, &j4].iter().all(|b| b.same_ctx(&j1)) {
            return Err(GcsError::ContextMismatch);
        }
        Ok(GCStructure { j1, j2, j3, j4 })
    }

    /// Splits a `2m x 2m` operator into blocks.
    pub fn from_full(full: &PolyMatrix) -> Result<Self, GcsError> {
        if full.rows() != full.cols() || full.rows() % 2 != 0 {
            return Err(GcsError::Shape);
        }
        let m = full.rows() / 2;
        GCStructure::new(full.block(0, 0, m, m), full.block(0, m, m, m), full.block(m, 0, m, m), full.block(m, m, m, m))
    }

    pub fn rank(&self) -> usize {
        self.j1.rows()
    }

    pub fn ctx(&self) -> &Ctx {
        self.j1.ctx()
    }

    pub fn blocks(&self) -> [&PolyMatrix; 4] {
        [&self.j1, &self.j2, &self.j3, &self.j4]
    }

    pub fn full(&self) -> PolyMatrix {
        PolyMatrix::from_blocks(&[vec![&self.j1, &self.j2], vec![&self.j3, &self.j4]])
    }

    pub fn is_constant(&self) -> bool {
        self.blocks().iter().all(|b| b.is_constant())
    }

    /// Checks e:1 to e:7 identically.
    pub fn validate(&self) -> Report {
        let ctx = self.ctx();
        let one = PolyMatrix::identity(self.rank(), ctx);
        let (j1, j2, j3, j4) = (&self.j1, &self.j2, &self.j3, &self.j4);
        let mut r = Report::default();
        r.expect_zero("e:1", &j1.mul(j1).add(&j2.mul(j3)).add(&one));
        r.expect_zero("e:2", &j1.mul(j2).add(&j2.mul(j4)));
        r.expect_zero("e:3", &j3.mul(j1).add(&j4.mul(j3)));
        r.expect_zero("e:4", &j4.mul(j4).add(&j3.mul(j2)).add(&one));
        r.expect_zero("e:5", &j4.add(&j1.transpose()));
        r.expect_zero("e:6", &j2.transpose().add(j2));
        r.expect_zero("e:7", &j3.transpose().add(j3));
        r
    }

    /// Complex type `(J, 0, 0, -J^T)`.
    pub fn from_complex(j: &PolyMatrix) -> Result<Self, GcsError> {
        if !j.is_square() {
            return Err(GcsError::Shape);
        }
        let m = j.rows();
        let ctx = j.ctx();
        if !j.mul(j).add(&PolyMatrix::identity(m, ctx)).is_zero() {
            return Err(GcsError::NotComplex);
        }
        let z = PolyMatrix::zeros(m, m, ctx);
        GCStructure::new(j.clone(), z.clone(), z, j.transpose().neg())
    }

    /// Symplectic type `(0, -w^{-1}, w, 0)`.
    pub fn from_symplectic(omega: &PolyMatrix) -> Result<Self, GcsError> {
        if !omega.is_square() {
            return Err(GcsError::Shape);
        }
        if !omega.is_antisymmetric() {
            return Err(GcsError::NotAntisymmetric);
        }
        let inv = omega.inverse().ok_or(GcsError::Singular)?;
        let z = PolyMatrix::zeros(omega.rows(), omega.rows(), omega.ctx());
        GCStructure::new(z.clone(), inv.neg(), omega.clone(), z)
    }

    fn conjugate(&self, g: &PolyMatrix, g_inv: &PolyMatrix) -> Self {
        GCStructure::from_full(&g.mul(&self.full()).mul(g_inv)).expect("shape preserved")
    }

    fn check_field(&self, b: &PolyMatrix) -> Result<(), GcsError> {
        if b.rows() != self.rank() || b.cols() != self.rank() {
            return Err(GcsError::Shape);
        }
        if !b.same_ctx(&self.j1) {
            return Err(GcsError::ContextMismatch);
        }
        if !b.is_antisymmetric() {
            return Err(GcsError::NotAntisymmetric);
        }
        Ok(())
    }

    /// `exp(B) J exp(-B)` with `exp(B) = [[1, 0], [B, 1]]`.
    pub fn b_transform(&self, b: &PolyMatrix) -> Result<Self, GcsError> {
        self.check_field(b)?;
        Ok(self.conjugate(&b_matrix(b), &b_matrix(&b.neg())))
    }

    /// `exp(beta) J exp(-beta)` with `exp(beta) = [[1, beta], [0, 1]]`.
    pub fn beta_transform(&self, beta: &PolyMatrix) -> Result<Self, GcsError> {
        self.check_field(beta)?;
        Ok(self.conjugate(&beta_matrix(beta), &beta_matrix(&beta.neg())))
    }

    /// The same operator read on `W^* + W`.
    pub fn tau_dual(&self) -> Self {
        GCStructure { j1: self.j4.clone(), j2: self.j3.clone(), j3: self.j2.clone(), j4: self.j1.clone() }
    }

    pub fn to_const(&self) -> Result<ConstMatrix, GcsError> {
        self.full().to_const().ok_or(GcsError::NotConstant)
    }

    /// The `+i` eigenspace, for constant entries.
    pub fn eigenbundle(&self) -> Result<IsotropicSubbundle, GcsError> {
        let m = self.rank();
        let full = self.to_const()?;
        let shifted = full.sub(&ConstMatrix::scalar(2 * m, &GaussRational::i()));
        let basis = shifted.nullspace();
        if basis.len() != m {
            return Err(GcsError::EigenDimension { expected: m, got: basis.len() });
        }
        let e = IsotropicSubbundle { rank: m, basis };
        if !(e.is_isotropic() && e.is_transverse()) {
            return Err(GcsError::NotTransverse);
        }
        Ok(e)
    }

    /// The canonical line over the frame `e1.., f1..` built on this context.
    pub fn pure_spinor(&self) -> Result<GradedElement, GcsError> {
        let gens = standard_frame(self.ctx(), self.rank())?;
        let basis: Vec<usize> = (0..self.rank()).map(|k| 2 * k).collect();
        self.pure_spinor_in(&gens, &basis)
    }

    /// The canonical line, with `basis[k]` the generator standing for the
    /// k-th basis vector of `W`; `W^*` is spanned by their partners.
    pub fn pure_spinor_in(&self, gens: &Gens, basis: &[usize]) -> Result<GradedElement, GcsError> {
        let e = self.eigenbundle()?;
        annihilated_line(gens, basis, &e.basis)
    }
}

fn b_matrix(b: &PolyMatrix) -> PolyMatrix {
    let m = b.rows();
    let one = PolyMatrix::identity(m, b.ctx());
    let z = PolyMatrix::zeros(m, m, b.ctx());
    PolyMatrix::from_blocks(&[vec![&one, &z], vec![b, &one]])
}

fn beta_matrix(beta: &PolyMatrix) -> PolyMatrix {
    let m = beta.rows();
    let one = PolyMatrix::identity(m, beta.ctx());
    let z = PolyMatrix::zeros(m, m, beta.ctx());
    PolyMatrix::from_blocks(&[vec![&one, beta], vec![&z, &one]])
}

/// Pairs `e_k` / `f_k`, `k = 1..m`.
pub fn standard_frame(ctx: &Ctx, m: usize) -> Result<Gens, ExteriorError> {
    let mut b = GeneratorSet::builder(ctx);
    for k in 1..=m {
        b = b.pair(&format!("e{k}"), &format!("f{k}"));
    }
    b.build()
}

/// `sum_{i<j} M_ij c_i ^ c_j` over the listed generators.
pub fn two_form(m: &PolyMatrix, gens: &Gens, idx: &[usize]) -> GradedElement {
    let mut out = GradedElement::zero(gens);
    for i in 0..m.rows() {
        for j in i + 1..m.cols() {
            let c = m.get(i, j).transfer(gens.ctx()).expect("matrix context matches generators");
            out = out.add(&GradedElement::monomial(gens, c, &[idx[i], idx[j]])).unwrap();
        }
    }
    out
}

/// The pairing `-1/2 (xi(w) + eta(v))` on `W + W^*`.
pub fn pairing(u: &[GaussRational], w: &[GaussRational]) -> GaussRational {
    let m = u.len() / 2;
    let mut s = GaussRational::zero();
    for k in 0..m {
        s = &s + &(&u[m + k] * &w[k]);
        s = &s + &(&w[m + k] * &u[k]);
    }
    &s * &GaussRational::from_frac(-1, 2)
}

/// A complex subspace of `(W + W^*) (x) C` given by basis columns.
#[derive(Clone, Debug, PartialEq)]
pub struct IsotropicSubbundle {
    pub rank: usize,
    pub basis: Vec<Vec<GaussRational>>,
}

impl IsotropicSubbundle {
    pub fn is_isotropic(&self) -> bool {
        self.basis.iter().all(|u| self.basis.iter().all(|w| pairing(u, w).is_zero()))
    }

    /// `E` meets its conjugate trivially.
    pub fn is_transverse(&self) -> bool {
        let mut cols = self.basis.clone();
        cols.extend(self.basis.iter().map(|v| v.iter().map(|c| c.conj()).collect::<Vec<_>>()));
        ConstMatrix::from_cols(&(), 2 * self.rank, &cols).rank() == 2 * self.rank
    }
}

/// Solves `iota_v phi + xi ^ phi = 0` for every section `(v; xi)`, with
/// `phi` ranging over the exterior algebra of the partners of `basis`.
/// The line is normalized so its first term in canonical order is 1.
pub fn annihilated_line(
    gens: &Gens,
    basis: &[usize],
    sections: &[Vec<GaussRational>],
) -> Result<GradedElement, GcsError> {
    let m = basis.len();
    let mut duals = Vec::with_capacity(m);
    for &g in basis {
        let gen = gens.get(g);
        duals.push(gen.partner.ok_or_else(|| ExteriorError::NoPartner(gen.name.clone()))?);
    }
    let ctx = gens.ctx();
    let unknowns: Vec<Blade> = (0u64..1 << m)
        .map(|mask| Blade::from_indices(&(0..m).filter(|k| mask >> k & 1 == 1).map(|k| duals[k]).collect::<Vec<_>>()))
        .collect();
    let actors: Vec<(GradedElement, GradedElement)> = sections
        .iter()
        .map(|s| {
            let mut v = GradedElement::zero(gens);
            let mut xi = GradedElement::zero(gens);
            for k in 0..m {
                v.add_term(Blade(1 << basis[k]), Poly::constant(ctx, s[k].clone()));
                xi.add_term(Blade(1 << duals[k]), Poly::constant(ctx, s[m + k].clone()));
            }
            (v, xi)
        })
        .collect();
    let mut rows: BTreeMap<(usize, Blade), Vec<GaussRational>> = BTreeMap::new();
    for (col, b) in unknowns.iter().enumerate() {
        let mut phi = GradedElement::zero(gens);
        phi.add_term(*b, Poly::one(ctx));
        for (s, (v, xi)) in actors.iter().enumerate() {
            let img = phi.contract(v)?.add(&xi.wedge(&phi)?)?;
            for (blade, c) in img.terms() {
                let row = rows.entry((s, *blade)).or_insert_with(|| vec![GaussRational::zero(); unknowns.len()]);
                row[col] = c.as_constant().expect("constant sections");
            }
        }
    }
    let system = ConstMatrix::from_rows(&(), unknowns.len(), rows.into_values().collect());
    let kernel = system.nullspace();
    if kernel.len() != 1 {
        return Err(GcsError::AnnihilatorDimension(kernel.len()));
    }
    let mut phi = GradedElement::zero(gens);
    for (b, c) in unknowns.iter().zip(&kernel[0]) {
        phi.add_term(*b, Poly::constant(ctx, c.clone()));
    }
    Ok(normalize_line(&phi))
}

/// Scales so the first term in canonical order has coefficient 1.
pub fn normalize_line(phi: &GradedElement) -> GradedElement {
    match phi.terms().next().and_then(|(_, c)| c.as_constant()).and_then(|c| c.inv()) {
        Some(inv) => phi.scale_const(&inv),
        None => phi.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::proportionality;
    use crate::scalar::Context;
    use proptest::prelude::*;

    fn ctx0() -> Ctx {
        Context::standard(2, 0, false)
    }

    fn m(rows: &[&[i64]]) -> PolyMatrix {
        PolyMatrix::from_int_rows(&ctx0(), rows)
    }

    fn std_complex() -> GCStructure {
        GCStructure::from_complex(&m(&[&[0, -1], &[1, 0]])).unwrap()
    }

    fn std_symplectic() -> GCStructure {
        GCStructure::from_symplectic(&m(&[&[0, 1], &[-1, 0]])).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(std_complex().validate().is_valid());
        assert!(std_symplectic().validate().is_valid());
        let one = m(&[&[1, 0], &[0, 1]]);
        let z = m(&[&[0, 0], &[0, 0]]);
        let bad = GCStructure::new(z.clone(), one.clone(), one, z).unwrap();
        let r = bad.validate();
        assert!(r.failed_labels().contains(&"e:1"));
        assert_eq!(r.checked.len(), 7);
    }

    #[test]
    fn constructor_examples() {
        let c = std_complex();
        assert_eq!(c.blocks()[3], &m(&[&[0, -1], &[1, 0]]));
        let s = std_symplectic();
        // 2x2 inverse oracle: [[a,b],[c,d]]^-1 = [[d,-b],[-c,a]]/(ad-bc)
        assert_eq!(s.blocks()[1], &m(&[&[0, 1], &[-1, 0]]));
        assert_eq!(s.blocks()[2], &m(&[&[0, 1], &[-1, 0]]));
        let s2 = GCStructure::from_symplectic(&m(&[&[0, 2], &[-2, 0]])).unwrap();
        let expected = PolyMatrix::parse_rows(&ctx0(), &[vec!["0", "1/2"], vec!["-1/2", "0"]]).unwrap();
        assert_eq!(s2.blocks()[1], &expected);
        assert_eq!(GCStructure::from_complex(&m(&[&[1, 0], &[0, 1]])), Err(GcsError::NotComplex));
        assert_eq!(GCStructure::from_symplectic(&m(&[&[0, 0], &[0, 0]])), Err(GcsError::Singular));
        assert_eq!(GCStructure::from_symplectic(&m(&[&[0, 1], &[1, 0]])), Err(GcsError::NotAntisymmetric));
    }

    #[test]
    fn transforms() {
        let ctx = ctx0();
        let b = PolyMatrix::parse_rows(&ctx, &[vec!["0", "x1"], vec!["-x1", "0"]]).unwrap();
        let s = std_symplectic();
        let zero = m(&[&[0, 0], &[0, 0]]);
        assert_eq!(s.b_transform(&zero).unwrap(), s);
        let t = s.b_transform(&b).unwrap();
        assert!(t.validate().is_valid());
        assert_eq!(t.b_transform(&b.neg()).unwrap(), s);
        assert_eq!(s.b_transform(&m(&[&[0, 1], &[0, 0]])), Err(GcsError::NotAntisymmetric));
        let c = std_complex();
        assert_eq!(c.tau_dual().blocks(), [&m(&[&[0, -1], &[1, 0]]), &zero, &zero, &m(&[&[0, -1], &[1, 0]])]);
        assert_eq!(c.tau_dual().tau_dual(), c);
        assert_eq!(c.b_transform(&b).unwrap().tau_dual(), c.tau_dual().beta_transform(&b).unwrap());
    }

    #[test]
    fn symplectic_spinor() {
        let s = std_symplectic();
        let phi = s.pure_spinor().unwrap();
        let gens = phi.gens().clone();
        assert_eq!(phi, GradedElement::parse(&gens, "exp(-i*f1^f2)").unwrap());
        assert_eq!(phi.to_canonical(), "1 - i*f1^f2");
    }

    #[test]
    fn complex_spinor() {
        let phi = std_complex().pure_spinor().unwrap();
        assert_eq!(phi.to_canonical(), "f1 - i*f2");
        let e = std_complex().eigenbundle().unwrap();
        assert_eq!(e.basis.len(), 2);
        assert!(e.is_isotropic() && e.is_transverse());
    }

    #[test]
    fn b_field_spinor() {
        // the spinor moves by the exponential of the 2-form sum_{i<j} B_ij f^i f^j
        let ctx = Context::standard(4, 0, false);
        let omega = PolyMatrix::from_int_rows(&ctx, &[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
        let b = PolyMatrix::from_int_rows(&ctx, &[&[0, 0, 2, 1], &[0, 0, 0, -1], &[-2, 0, 0, 3], &[-1, 1, -3, 0]]);
        let s = GCStructure::from_symplectic(&omega).unwrap();
        let phi = s.pure_spinor().unwrap();
        let gens = phi.gens().clone();
        let fs = [1, 3, 5, 7];
        let moved = s.b_transform(&b).unwrap().pure_spinor_in(&gens, &[0, 2, 4, 6]).unwrap();
        let expected = two_form(&b, &gens, &fs).exp().unwrap().wedge(&phi).unwrap();
        assert!(proportionality(&moved, &expected).is_some());
        let iw = two_form(&omega, &gens, &fs).scale_const(&GaussRational::from_parts((0, 1), (-1, 1)));
        assert!(proportionality(&phi, &iw.exp().unwrap()).is_some());
    }

    #[test]
    fn non_constant_structures_have_no_eigenbundle() {
        let ctx = ctx0();
        let b = PolyMatrix::parse_rows(&ctx, &[vec!["0", "x1"], vec!["-x1", "0"]]).unwrap();
        let t = std_symplectic().b_transform(&b).unwrap();
        assert_eq!(t.eigenbundle(), Err(GcsError::NotConstant));
    }

    fn arb_antisym(n: usize) -> impl Strategy<Value = PolyMatrix> {
        proptest::collection::vec(-3i64..4, n * n).prop_map(move |v| {
            let ctx = Context::standard(n, 0, false);
            PolyMatrix::from_fn(n, n, &ctx, |r, c| match r.cmp(&c) {
                std::cmp::Ordering::Less => Poly::int(&ctx, v[r * n + c]),
                std::cmp::Ordering::Greater => Poly::int(&ctx, -v[c * n + r]),
                _ => Poly::zero(&ctx),
            })
        })
    }

    fn complex4() -> GCStructure {
        let ctx = Context::standard(4, 0, false);
        let j = PolyMatrix::from_int_rows(&ctx, &[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
        GCStructure::from_complex(&j).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn transforms_preserve_validity(b in arb_antisym(4), beta in arb_antisym(4)) {
            let t = complex4().b_transform(&b).unwrap().beta_transform(&beta).unwrap();
            prop_assert!(t.validate().is_valid());
            prop_assert!(t.tau_dual().validate().is_valid());
        }

        #[test]
        fn spinor_is_annihilated(b in arb_antisym(4), beta in arb_antisym(4)) {
            let t = complex4().b_transform(&b).unwrap().beta_transform(&beta).unwrap();
            let e = t.eigenbundle().unwrap();
            let phi = t.pure_spinor().unwrap();
            let gens = phi.gens().clone();
            for s in &e.basis {
                let mut v = GradedElement::zero(&gens);
                let mut xi = GradedElement::zero(&gens);
                for k in 0..4 {
                    v.add_term(Blade(1 << (2 * k)), Poly::constant(gens.ctx(), s[k].clone()));
                    xi.add_term(Blade(1 << (2 * k + 1)), Poly::constant(gens.ctx(), s[4 + k].clone()));
                }
                prop_assert!(phi.clifford_act(&v, &xi).unwrap().is_zero());
            }
        }

        #[test]
        fn orthogonality(b in arb_antisym(4), beta in arb_antisym(4)) {
            let t = complex4().b_transform(&b).unwrap().beta_transform(&beta).unwrap();
            let j = t.to_const().unwrap();
            let q = ConstMatrix::from_fn(8, 8, &(), |r, c| {
                if (r + 4 == c) || (c + 4 == r) { GaussRational::one() } else { GaussRational::zero() }
            });
            prop_assert_eq!(j.transpose().mul(&q).mul(&j), q.clone());
            let tau = q;
            let tj = tau.mul(&j).mul(&tau);
            prop_assert_eq!(tj, t.tau_dual().to_const().unwrap());
        }
    }
}
