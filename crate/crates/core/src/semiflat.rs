//! Adapted block data of semi-flat structures on the total space of a flat
//! rank-n bundle, written in a flat frame and flat base coordinates.

use crate::courant::{courant_bracket, BracketVerdict, CourantError, GeneralizedSection};
use crate::gcs::{GCStructure, GcsError};
use crate::matrix::PolyMatrix;
use crate::report::Report;
use crate::scalar::{Context, Ctx, GaussRational, Poly, ScalarError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemiflatError {
    #[error("blocks must be square of size n = {0}")]
    Shape(usize),
    #[error("chart needs n base and n fiber coordinates")]
    Chart,
    #[error("block entries may depend on base coordinates only: {0}")]
    FiberDependence(ScalarError),
    #[error("operator does not map V+V* onto T+T* in the adapted pattern")]
    NotAdapted,
    #[error("adapted equations fail: {0:?}")]
    Invalid(Vec<String>),
    #[error("index {0} is out of range")]
    Index(usize),
    #[error(transparent)]
    Gcs(#[from] GcsError),
    #[error(transparent)]
    Courant(#[from] CourantError),
}

/// `J12: T -> V`, `J13: V -> T`, `J22: T^* -> V`, `J31: T -> V^*`.
#[derive(Clone, Debug)]
pub struct AdaptedBlocks {
    chart: Ctx,
    base: Ctx,
    pub j12: PolyMatrix,
    pub j13: PolyMatrix,
    pub j22: PolyMatrix,
    pub j31: PolyMatrix,
}

impl PartialEq for AdaptedBlocks {
    fn eq(&self, o: &Self) -> bool {
        self.j12 == o.j12 && self.j13 == o.j13 && self.j22 == o.j22 && self.j31 == o.j31
    }
}

fn base_of(chart: &Ctx) -> Result<Ctx, SemiflatError> {
    if chart.n_base() != chart.n_fiber() {
        return Err(SemiflatError::Chart);
    }
    Context::new(chart.base_names().to_vec(), vec![], false).map_err(|_| SemiflatError::Chart)
}

impl AdaptedBlocks {
    /// Blocks may be given in any context whose variables they use are base
    /// coordinates of `chart`.
    pub fn new(chart: &Ctx, j12: &PolyMatrix, j13: &PolyMatrix, j22: &PolyMatrix, j31: &PolyMatrix) -> Result<Self, SemiflatError> {
        let base = base_of(chart)?;
        let n = chart.n_base();
        let mv = |m: &PolyMatrix| -> Result<PolyMatrix, SemiflatError> {
            if m.rows() != n || m.cols() != n {
                return Err(SemiflatError::Shape(n));
            }
            m.try_map(&base, |p| p.transfer(&base)).map_err(SemiflatError::FiberDependence)
        };
        Ok(AdaptedBlocks { chart: chart.clone(), j12: mv(j12)?, j13: mv(j13)?, j22: mv(j22)?, j31: mv(j31)?, base })
    }

    /// Chart `x1..xn, xi1..xin`.
    pub fn standard(j12: &PolyMatrix, j13: &PolyMatrix, j22: &PolyMatrix, j31: &PolyMatrix) -> Result<Self, SemiflatError> {
        AdaptedBlocks::new(&Context::standard(j12.rows(), j12.rows(), false), j12, j13, j22, j31)
    }

    pub fn n(&self) -> usize {
        self.j12.rows()
    }

    pub fn chart(&self) -> &Ctx {
        &self.chart
    }

    pub fn base(&self) -> &Ctx {
        &self.base
    }

    pub fn blocks(&self) -> [&PolyMatrix; 4] {
        [&self.j12, &self.j13, &self.j22, &self.j31]
    }

    fn with_blocks(&self, j12: PolyMatrix, j13: PolyMatrix, j22: PolyMatrix, j31: PolyMatrix) -> Self {
        AdaptedBlocks { chart: self.chart.clone(), base: self.base.clone(), j12, j13, j22, j31 }
    }

    /// Equations K1 to K6.
    pub fn validate(&self) -> Report {
        let one = PolyMatrix::identity(self.n(), &self.base);
        let (a, b, c, d) = (&self.j12, &self.j13, &self.j22, &self.j31);
        let (at, bt, ct, dt) = (a.transpose(), b.transpose(), c.transpose(), d.transpose());
        let mut r = Report::default();
        r.expect_zero("K1", &a.mul(b).sub(&c.mul(&dt)).add(&one));
        r.expect_zero("K2", &a.mul(&ct).add(&c.mul(&at)));
        r.expect_zero("K3", &b.mul(a).sub(&ct.mul(d)).add(&one));
        r.expect_zero("K4", &b.mul(c).add(&ct.mul(&bt)));
        r.expect_zero("K5", &d.mul(b).add(&bt.mul(&dt)));
        r.expect_zero("K6", &dt.mul(a).add(&at.mul(d)));
        r
    }

    fn require_valid(&self) -> Result<(), SemiflatError> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            Err(SemiflatError::Invalid(r.failed_labels().iter().map(|s| s.to_string()).collect()))
        }
    }

    /// `(J12, J13, J22, J31) -> (J31, -J22^T, -J13^T, J12)`.
    pub fn mirror(&self) -> Self {
        self.with_blocks(self.j31.clone(), self.j22.transpose().neg(), self.j13.transpose().neg(), self.j12.clone())
    }

    /// The operator on `V + T + V^* + T^*`.
    pub fn underline(&self) -> PolyMatrix {
        let z = PolyMatrix::zeros(self.n(), self.n(), &self.base);
        let (a, b, c, d) = (&self.j12, &self.j13, &self.j22, &self.j31);
        let (at, bt, ct, dt) = (a.transpose().neg(), b.transpose().neg(), c.transpose().neg(), d.transpose().neg());
        PolyMatrix::from_blocks(&[
            vec![&z, a, &z, c],
            vec![b, &z, &ct, &z],
            vec![&z, d, &z, &bt],
            vec![&dt, &z, &at, &z],
        ])
    }

    /// Reads blocks back from an operator on `V + T + V^* + T^*`.
    pub fn from_underline(&self, m: &PolyMatrix) -> Result<Self, SemiflatError> {
        let n = self.n();
        if m.rows() != 4 * n || m.cols() != 4 * n {
            return Err(SemiflatError::Shape(n));
        }
        let out = self.with_blocks(m.block(0, n, n, n), m.block(n, 0, n, n), m.block(0, 3 * n, n, n), m.block(2 * n, n, n, n));
        if &out.underline() != m {
            return Err(SemiflatError::NotAdapted);
        }
        Ok(out)
    }

    fn conjugated(&self, g: &PolyMatrix, g_inv: &PolyMatrix) -> Result<Self, SemiflatError> {
        self.from_underline(&g.mul(&self.underline()).mul(g_inv))
    }

    fn unit_blocks(&self, grid: [[Option<&PolyMatrix>; 4]; 4]) -> PolyMatrix {
        let n = self.n();
        let one = PolyMatrix::identity(n, &self.base);
        let z = PolyMatrix::zeros(n, n, &self.base);
        let rows: Vec<Vec<&PolyMatrix>> = (0..4)
            .map(|r| (0..4).map(|c| grid[r][c].unwrap_or(if r == c { &one } else { &z })).collect())
            .collect();
        PolyMatrix::from_blocks(&rows)
    }

    fn base_field(&self, m: &PolyMatrix) -> Result<PolyMatrix, SemiflatError> {
        if m.rows() != self.n() || m.cols() != self.n() {
            return Err(SemiflatError::Shape(self.n()));
        }
        if !m.is_antisymmetric() {
            return Err(GcsError::NotAntisymmetric.into());
        }
        m.try_map(&self.base, |p| p.transfer(&self.base)).map_err(SemiflatError::FiberDependence)
    }

    /// B-field transform by `B31 in Lambda^2 V^*` and `B34 in Lambda^2 T^*`.
    pub fn b_transform(&self, b31: &PolyMatrix, b34: &PolyMatrix) -> Result<Self, SemiflatError> {
        let (p, q) = (self.base_field(b31)?, self.base_field(b34)?);
        let (pn, qn) = (p.neg(), q.neg());
        let mut g = [[None; 4]; 4];
        g[2][0] = Some(&p);
        g[3][1] = Some(&q);
        let mut gi = [[None; 4]; 4];
        gi[2][0] = Some(&pn);
        gi[3][1] = Some(&qn);
        self.conjugated(&self.unit_blocks(g), &self.unit_blocks(gi))
    }

    /// beta-field transform by `beta21 in Lambda^2 V` and `beta24 in Lambda^2 T`.
    pub fn beta_transform(&self, beta21: &PolyMatrix, beta24: &PolyMatrix) -> Result<Self, SemiflatError> {
        let (p, q) = (self.base_field(beta21)?, self.base_field(beta24)?);
        let (pn, qn) = (p.neg(), q.neg());
        let mut g = [[None; 4]; 4];
        g[0][2] = Some(&p);
        g[1][3] = Some(&q);
        let mut gi = [[None; 4]; 4];
        gi[0][2] = Some(&pn);
        gi[1][3] = Some(&qn);
        self.conjugated(&self.unit_blocks(g), &self.unit_blocks(gi))
    }

    /// Conjugation by `diag(a, c, a^{-T}, c^{-T})`; `a` and `c` must have unit determinant.
    pub fn change_frame(&self, a: &PolyMatrix, c: &PolyMatrix) -> Result<Self, SemiflatError> {
        let inv = |m: &PolyMatrix| -> Result<PolyMatrix, SemiflatError> {
            let m = m.try_map(&self.base, |p| p.transfer(&self.base)).map_err(SemiflatError::FiberDependence)?;
            m.inverse().ok_or(GcsError::Singular.into())
        };
        let (ai, ci) = (inv(a)?, inv(c)?);
        let (a, c) = (inv(&ai)?, inv(&ci)?);
        let (ait, cit, at, ct) = (ai.transpose(), ci.transpose(), a.transpose(), c.transpose());
        let g = self.unit_blocks([
            [Some(&a), None, None, None],
            [None, Some(&c), None, None],
            [None, None, Some(&ait), None],
            [None, None, None, Some(&cit)],
        ]);
        let gi = self.unit_blocks([
            [Some(&ai), None, None, None],
            [None, Some(&ci), None, None],
            [None, None, Some(&at), None],
            [None, None, None, Some(&ct)],
        ]);
        self.conjugated(&g, &gi)
    }

    /// The structure on the chart `(x, xi)`, with `V = span d/dxi` and
    /// `T = span d/dx`.
    pub fn lift(&self) -> Result<GCStructure, SemiflatError> {
        self.require_valid()?;
        let n = self.n();
        let under = self.underline();
        // chart order (d/dx, d/dxi, dx, dxi) against (V, T, V*, T*)
        let perm: Vec<usize> = (0..4 * n)
            .map(|r| match r / n {
                0 => r + n,
                1 => r - n,
                2 => r + n,
                _ => r - n,
            })
            .collect();
        let full = under.permute(&perm).try_map(&self.chart, |p| p.transfer(&self.chart)).map_err(SemiflatError::FiberDependence)?;
        Ok(GCStructure::from_full(&full)?)
    }

    /// `M = [[J13, J22^T], [-J31^T, J12^T]]` from `V + V^*` to `T + T^*`.
    pub fn m_matrix(&self) -> PolyMatrix {
        let c = self.j22.transpose();
        let d = self.j31.transpose().neg();
        let a = self.j12.transpose();
        PolyMatrix::from_blocks(&[vec![&self.j13, &c], vec![&d, &a]])
    }

    /// Inverse of [`AdaptedBlocks::m_matrix`] when K1 to K6 hold:
    /// `[[-J12, -J22], [J31, -J13^T]]`.
    pub fn m_inverse(&self) -> PolyMatrix {
        let a = self.j12.neg();
        let c = self.j22.neg();
        let d = self.j13.transpose().neg();
        PolyMatrix::from_blocks(&[vec![&a, &c], vec![&self.j31, &d]])
    }

    /// Columns of `M` as sections over the base: `a_i` then `b_i`.
    pub fn m_columns(&self) -> Vec<GeneralizedSection> {
        let m = self.m_matrix();
        let n = self.n();
        (0..2 * n).map(|c| GeneralizedSection::from_stacked(&self.base, m.col(c))).collect()
    }

    pub fn m_labels(&self) -> Vec<String> {
        let n = self.n();
        (1..=n).map(|i| format!("a{i}")).chain((1..=n).map(|i| format!("b{i}"))).collect()
    }

    /// Vanishing of all pairwise Courant brackets of the images under `M`
    /// of the flat frame.
    pub fn integrability(&self) -> Result<BracketVerdict, SemiflatError> {
        self.require_valid()?;
        let cols = self.m_columns();
        Ok(BracketVerdict::over_pairs(&self.m_labels(), |a, b| courant_bracket(&cols[a], &cols[b]))?)
    }

    /// `Delta = J(V)` and `Delta^ = J(V^*)`.
    pub fn dirac_structures(&self) -> Result<(DiracStructure, DiracStructure), SemiflatError> {
        self.require_valid()?;
        let n = self.n();
        let delta = (0..n)
            .map(|i| {
                let x = self.j13.col(i);
                let xi = self.j31.transpose().neg().col(i);
                GeneralizedSection::new(&self.base, x, xi)
            })
            .collect();
        let hat = (0..n)
            .map(|i| {
                let x = self.j22.transpose().neg().col(i);
                let xi = self.j12.transpose().neg().col(i);
                GeneralizedSection::new(&self.base, x, xi)
            })
            .collect();
        let d = DiracStructure { ctx: self.base.clone(), columns: delta };
        let h = DiracStructure { ctx: self.base.clone(), columns: hat };
        if !(d.is_isotropic() && h.is_isotropic() && d.is_transverse_to(&h)) {
            return Err(GcsError::NotTransverse.into());
        }
        Ok((d, h))
    }

    /// The four inclusions for the brane over `S` with fiber `W`,
    /// after restricting to `S`.
    pub fn brane_check(&self, d: &BraneDatum) -> Result<BraneReport, SemiflatError> {
        let n = self.n();
        if let Some(&k) = d.s.iter().chain(&d.w).find(|&&k| k >= n) {
            return Err(SemiflatError::Index(k + 1));
        }
        let zero_out: Vec<(usize, GaussRational)> = (0..n).filter(|k| !d.s.contains(k)).map(|k| (k, GaussRational::zero())).collect();
        let r = |m: &PolyMatrix| m.substitute(&zero_out);
        let (a, b, c, e) = (r(&self.j12), r(&self.j13), r(&self.j22), r(&self.j31));
        let in_s = |k: usize| d.s.contains(&k);
        let in_w = |k: usize| d.w.contains(&k);
        let vanish = |m: &PolyMatrix, row: &dyn Fn(usize) -> bool, col: &dyn Fn(usize) -> bool| {
            (0..n).all(|i| (0..n).all(|j| !(row(i) && col(j)) || m.get(i, j).is_zero()))
        };
        Ok(BraneReport {
            e1: vanish(&b, &|k| !in_s(k), &in_w),
            e2: vanish(&a, &|k| !in_w(k), &in_s),
            e3: vanish(&c, &|l| !in_w(l), &|k| !in_s(k)),
            e4: vanish(&e, &in_w, &in_s),
        })
    }
}

/// A maximal isotropic subbundle of `T + T^*` over the base, by basis columns.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracStructure {
    ctx: Ctx,
    pub columns: Vec<GeneralizedSection>,
}

impl DiracStructure {
    fn matrix(&self, extra: &[&GeneralizedSection]) -> PolyMatrix {
        let cols: Vec<Vec<Poly>> = self.columns.iter().chain(extra.iter().copied()).map(|c| c.stacked()).collect();
        PolyMatrix::from_cols(&self.ctx, 2 * self.ctx.n_vars(), &cols)
    }

    pub fn rank(&self) -> usize {
        self.matrix(&[]).rank()
    }

    pub fn is_isotropic(&self) -> bool {
        self.columns.iter().all(|u| self.columns.iter().all(|w| u.pairing(w).is_zero()))
    }

    pub fn is_transverse_to(&self, o: &DiracStructure) -> bool {
        let refs: Vec<&GeneralizedSection> = o.columns.iter().collect();
        self.matrix(&refs).rank() == self.columns.len() + o.columns.len()
    }

    /// Brackets of basis columns stay in the span (over rational functions).
    pub fn is_involutive(&self) -> Result<bool, SemiflatError> {
        let r = self.rank();
        for (i, u) in self.columns.iter().enumerate() {
            for w in &self.columns[i + 1..] {
                let br = courant_bracket(u, w)?;
                if !br.is_zero() && self.matrix(&[&br]).rank() != r {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Same span as another structure, compared by rank.
    pub fn same_span(&self, o: &DiracStructure) -> bool {
        let refs: Vec<&GeneralizedSection> = o.columns.iter().collect();
        let r = self.rank();
        r == o.rank() && self.matrix(&refs).rank() == r
    }
}

/// Base directions `S` and fiber directions `W`, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraneDatum {
    pub s: Vec<usize>,
    pub w: Vec<usize>,
}

/// The mirror brane keeps `S` and replaces `W` by its annihilator.
pub fn brane_mirror(d: &BraneDatum, n: usize) -> BraneDatum {
    BraneDatum { s: d.s.clone(), w: (0..n).filter(|k| !d.w.contains(k)).collect() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BraneReport {
    /// `J13(W) in T_S`
    pub e1: bool,
    /// `J12(T_S) in W`
    pub e2: bool,
    /// `J22(Ann T_S) in W`
    pub e3: bool,
    /// `J31(T_S) in Ann W`
    pub e4: bool,
}

impl BraneReport {
    pub fn is_brane(&self) -> bool {
        self.e1 && self.e2 && self.e3 && self.e4
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::integrability_by_nijenhuis;

    fn base(n: usize) -> Ctx {
        Context::standard(n, 0, false)
    }

    fn pm(n: usize, rows: &[&[&str]]) -> PolyMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        PolyMatrix::parse_rows(&base(n), &rows).unwrap()
    }

    fn ident(n: usize) -> PolyMatrix {
        PolyMatrix::identity(n, &base(n))
    }

    fn zero(n: usize) -> PolyMatrix {
        PolyMatrix::zeros(n, n, &base(n))
    }

    fn complex(n: usize) -> AdaptedBlocks {
        AdaptedBlocks::standard(&ident(n), &ident(n).neg(), &zero(n), &zero(n)).unwrap()
    }

    fn b_complex(bp: &PolyMatrix) -> AdaptedBlocks {
        let n = bp.rows();
        AdaptedBlocks::standard(&ident(n), &ident(n).neg(), &zero(n), bp).unwrap()
    }

    fn antisym3(entry: &str) -> PolyMatrix {
        let neg = format!("-({entry})");
        pm(3, &[&["0", entry, "0"], &[&neg, "0", "0"], &["0", "0", "0"]])
    }

    #[test]
    fn validation_examples() {
        let l = pm(2, &[&["1", "x1"], &["0", "1"]]);
        let li = l.inverse().unwrap();
        let c = AdaptedBlocks::standard(&l, &li.neg(), &zero(2), &zero(2)).unwrap();
        assert!(c.validate().is_valid());
        // J22 J31^T = 1 solves K1 with J12 = J13 = 0
        let s = AdaptedBlocks::standard(&zero(2), &zero(2), &l, &li.transpose()).unwrap();
        assert!(s.validate().is_valid());
        let bad = AdaptedBlocks::standard(&ident(2), &ident(2), &zero(2), &zero(2)).unwrap();
        assert!(bad.validate().failed_labels().contains(&"K1"));
    }

    #[test]
    fn mirror_examples() {
        let l = pm(2, &[&["1", "x1"], &["0", "1"]]);
        let li = l.inverse().unwrap();
        let c = AdaptedBlocks::standard(&l, &li.neg(), &zero(2), &zero(2)).unwrap();
        let m = c.mirror();
        assert_eq!(m.blocks(), [&zero(2), &zero(2), &li.transpose(), &l]);
        assert!(m.validate().is_valid());
        assert_eq!(m.mirror(), c);
        // the B-complex family goes to a beta-transform of the canonical symplectic blocks
        let bp = antisym3("x3");
        let m = b_complex(&bp).mirror();
        assert_eq!(m.blocks(), [&bp, &zero(3), &ident(3), &ident(3)]);
        let sympl = AdaptedBlocks::standard(&zero(3), &zero(3), &ident(3), &ident(3)).unwrap();
        assert_eq!(sympl.beta_transform(&bp, &zero(3)).unwrap(), m);
    }

    #[test]
    fn lift_examples() {
        let j = complex(1).lift().unwrap();
        // J d/dx = d/dxi, J d/dxi = -d/dx
        let c = j.ctx().clone();
        let full = j.full();
        assert_eq!(full.col(0), vec![Poly::zero(&c), Poly::one(&c), Poly::zero(&c), Poly::zero(&c)]);
        assert_eq!(full.col(1), vec![Poly::int(&c, -1), Poly::zero(&c), Poly::zero(&c), Poly::zero(&c)]);
        assert!(j.validate().is_valid());
        let s = complex(2).mirror().lift().unwrap();
        assert!(s.validate().is_valid());
        assert!(s.blocks()[0].is_zero() && s.blocks()[3].is_zero());
        assert!(integrability_by_nijenhuis(&s).unwrap().integrable);
    }

    #[test]
    fn m_matrix_examples() {
        let l = pm(2, &[&["1", "x1"], &["0", "1"]]);
        let li = l.inverse().unwrap();
        let c = AdaptedBlocks::standard(&l, &li.neg(), &zero(2), &zero(2)).unwrap();
        let lt = l.transpose();
        let lin = li.neg();
        let z = zero(2);
        assert_eq!(c.m_matrix(), PolyMatrix::from_blocks(&[vec![&lin, &z], vec![&z, &lt]]));
        assert!(c.m_matrix().mul(&c.m_inverse()).is_identity());
        // the printed inverse inverts M only up to the sign of its second block row
        let printed = PolyMatrix::from_blocks(&[
            vec![&c.j12.neg(), &c.j22.neg()],
            vec![&c.j31.neg(), &c.j13.transpose()],
        ]);
        let one = ident(2);
        let flip = PolyMatrix::from_blocks(&[vec![&one, &z], vec![&z, &one.neg()]]);
        assert_eq!(printed.mul(&c.m_matrix()), flip);
    }

    #[test]
    fn mirror_m_matrix_is_a_column_swap() {
        let b = b_complex(&antisym3("x3 + 2*x1")).b_transform(&antisym3("x2"), &antisym3("1")).unwrap();
        let n = b.n();
        let one = ident(n);
        let z = zero(n);
        let swap = PolyMatrix::from_blocks(&[vec![&z, &one.neg()], vec![&one.neg(), &z]]);
        assert_eq!(b.mirror().m_matrix(), b.m_matrix().mul(&swap));
    }

    #[test]
    fn b_complex_integrability() {
        let closed = b_complex(&antisym3("x1"));
        assert!(closed.integrability().unwrap().integrable);
        let open = b_complex(&antisym3("x3"));
        let v = open.integrability().unwrap();
        assert!(!v.integrable);
        let w = v.witness.unwrap();
        assert_eq!((w.left.as_str(), w.right.as_str()), ("a1", "a2"));
        assert!(!integrability_by_nijenhuis(&open.lift().unwrap()).unwrap().integrable);
        assert!(integrability_by_nijenhuis(&closed.lift().unwrap()).unwrap().integrable);
    }

    #[test]
    fn dirac_examples() {
        let c = complex(2);
        let (d, h) = c.dirac_structures().unwrap();
        let tangent = d.columns.iter().all(|s| s.xi.iter().all(|p| p.is_zero()));
        assert!(tangent && d.rank() == 2);
        let (ds, hs) = c.mirror().dirac_structures().unwrap();
        assert!(ds.columns.iter().all(|s| s.x.iter().all(|p| p.is_zero())));
        assert_eq!(ds, h);
        assert_eq!(hs, d);
        assert!(d.is_involutive().unwrap() && h.is_involutive().unwrap());
    }

    #[test]
    fn brane_examples() {
        let c = complex(2);
        let full = BraneDatum { s: vec![0, 1], w: vec![0, 1] };
        assert!(c.brane_check(&full).unwrap().is_brane());
        let m = brane_mirror(&full, 2);
        assert!(m.w.is_empty());
        assert!(c.mirror().brane_check(&m).unwrap().is_brane());
        let half = BraneDatum { s: vec![0], w: vec![1] };
        assert!(!c.brane_check(&half).unwrap().is_brane());
        assert!(matches!(c.brane_check(&BraneDatum { s: vec![2], w: vec![] }), Err(SemiflatError::Index(3))));
    }

    #[test]
    fn fiber_dependence_rejected() {
        let chart = Context::standard(1, 1, false);
        let m = PolyMatrix::parse_rows(&chart, &[vec!["xi1"]]).unwrap();
        let one = PolyMatrix::parse_rows(&chart, &[vec!["1"]]).unwrap();
        assert!(matches!(AdaptedBlocks::new(&chart, &m, &one, &one, &one), Err(SemiflatError::FiberDependence(_))));
    }
}
