//! Generalized almost Kähler pairs.

use crate::gcs::{GCStructure, GcsError};
use crate::matrix::{ConstMatrix, PolyMatrix, RatMatrix};
use crate::report::{Report, Violation};
use crate::scalar::{Ctx, GaussRational};
use crate::semiflat::{AdaptedBlocks, SemiflatError};
use num::{Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KahlerError {
    #[error("structures act on different spaces")]
    Mismatch,
    #[error("{0} is singular")]
    Singular(&'static str),
    #[error("{0} has non-polynomial entries")]
    NotPolynomial(&'static str),
    #[error("sample point has {got} coordinates but the chart has {max}")]
    Sample { got: usize, max: usize },
    #[error("not a generalized Kähler pair: {}", .0.join(", "))]
    Invalid(Vec<String>),
    #[error("foliation is not compatible: {}", .0.join(", "))]
    Incompatible(Vec<String>),
    #[error("foliation index {0} out of range or repeated")]
    Foliation(usize),
    #[error("{0} differs from the direct product")]
    FormulaMismatch(&'static str),
    #[error(transparent)]
    Gcs(#[from] GcsError),
    #[error(transparent)]
    Semiflat(#[from] SemiflatError),
}

fn rat_inverse(m: &PolyMatrix, what: &'static str) -> Result<RatMatrix, KahlerError> {
    m.to_ratfunc().inverse().ok_or(KahlerError::Singular(what))
}

fn to_poly(m: &RatMatrix, what: &'static str) -> Result<PolyMatrix, KahlerError> {
    m.to_poly().ok_or(KahlerError::NotPolynomial(what))
}

fn label_point(p: &[GaussRational]) -> String {
    let s: Vec<String> = p.iter().map(|v| v.to_string()).collect();
    format!("positive@({})", s.join(", "))
}

/// Positive definiteness of a constant matrix by leading principal minors.
pub fn is_positive_definite(m: &ConstMatrix) -> bool {
    if !m.is_square() || !m.is_symmetric() || m.entries().any(|(_, _, v)| !v.im.is_zero()) {
        return false;
    }
    (1..=m.rows()).all(|k| {
        let d = m.block(0, 0, k, k).det();
        d.im.is_zero() && d.re.is_positive()
    })
}

/// Positivity of `w` against the split form `xi(Y) + eta(X)` at each sample.
fn positivity(report: &mut Report, w: &PolyMatrix, samples: &[Vec<GaussRational>]) -> Result<(), KahlerError> {
    let ctx = w.ctx().clone();
    let m = w.rows() / 2;
    let z = PolyMatrix::zeros(m, m, &ctx);
    let one = PolyMatrix::identity(m, &ctx);
    let q = PolyMatrix::from_blocks(&[vec![&z, &one], vec![&one, &z]]);
    let gram = q.mul(w);
    for p in samples {
        if p.len() > ctx.n_vars() {
            return Err(KahlerError::Sample { got: p.len(), max: ctx.n_vars() });
        }
        let label = label_point(p);
        report.checked.push(label.clone());
        let vals: Vec<(usize, GaussRational)> = p.iter().cloned().enumerate().collect();
        let at = gram.substitute(&vals).to_const();
        if !at.as_ref().is_some_and(is_positive_definite) {
            report.violations.push(Violation { label, row: 0, col: 0, value: "not positive definite".into() });
        }
    }
    Ok(())
}

/// A pair of generalized almost complex structures on the same space.
#[derive(Clone, Debug, PartialEq)]
pub struct GKPair {
    j: GCStructure,
    jp: GCStructure,
}

impl GKPair {
    pub fn new(j: GCStructure, jp: GCStructure) -> Result<Self, KahlerError> {
        if j.rank() != jp.rank() || !j.full().same_ctx(&jp.full()) {
            return Err(KahlerError::Mismatch);
        }
        Ok(GKPair { j, jp })
    }

    pub fn first(&self) -> &GCStructure {
        &self.j
    }

    pub fn second(&self) -> &GCStructure {
        &self.jp
    }

    pub fn ctx(&self) -> &Ctx {
        self.j.ctx()
    }

    pub fn rank(&self) -> usize {
        self.j.rank()
    }

    /// `G = -J J'`.
    pub fn metric_operator(&self) -> PolyMatrix {
        self.j.full().mul(&self.jp.full()).neg()
    }

    /// Both structures, commutation, `G^2 = 1`, and positivity at each sample.
    /// An empty sample list checks the origin.
    pub fn validate(&self, samples: &[Vec<GaussRational>]) -> Result<Report, KahlerError> {
        let mut r = Report::default();
        for (tag, s) in [("J", &self.j), ("J'", &self.jp)] {
            for mut v in s.validate().violations {
                v.label = format!("{tag} {}", v.label);
                r.violations.push(v);
            }
        }
        let (a, b) = (self.j.full(), self.jp.full());
        r.expect_zero("commute", &a.mul(&b).sub(&b.mul(&a)));
        let g = self.metric_operator();
        r.expect_zero("G^2 = 1", &g.mul(&g).sub(&PolyMatrix::identity(2 * self.rank(), self.ctx())));
        let origin = [vec![GaussRational::zero(); self.ctx().n_vars()]];
        positivity(&mut r, &g, if samples.is_empty() { &origin } else { samples })?;
        Ok(r)
    }

    fn require_valid(&self) -> Result<(), KahlerError> {
        let r = self.validate(&[])?;
        if r.is_valid() {
            Ok(())
        } else {
            Err(KahlerError::Invalid(r.failed_labels().iter().map(|s| s.to_string()).collect()))
        }
    }

    /// `(g, b, J+, J-)` read off the eigenbundles of `G`.
    pub fn extract_metric_data(&self) -> Result<MetricData, KahlerError> {
        self.require_valid()?;
        let m = self.rank();
        let g_op = self.metric_operator();
        let ginv = g_op.block(0, m, m, m);
        let g = rat_inverse(&ginv, "G12")?;
        let b = g.mul(&g_op.block(0, 0, m, m).to_ratfunc()).neg();
        let (g, b) = (to_poly(&g, "g")?, to_poly(&b, "b")?);
        let [j1, j2, _, _] = self.j.blocks();
        let jp_ = j1.add(&j2.mul(&g.add(&b)));
        let jm_ = j1.add(&j2.mul(&b.sub(&g)));
        Ok(MetricData { g, b, j_plus: jp_, j_minus: jm_ })
    }

    /// `K+ = J1 + J'1` and `K- = J1 - J'1`.
    pub fn k_maps(&self) -> (PolyMatrix, PolyMatrix) {
        let (a, b) = (self.j.blocks()[0], self.jp.blocks()[0]);
        (a.add(b), a.sub(b))
    }

    /// Residuals of `K+ (-f (g+b) J+) = 1` and `(-f (g-b) J-) K- = 1` with
    /// `f = (g - b g^{-1} b)^{-1}`.
    pub fn k_inverse_check(&self) -> Result<Report, KahlerError> {
        let md = self.extract_metric_data()?;
        let f = md.g3().to_ratfunc().inverse().ok_or(KahlerError::Singular("g - b g^-1 b"))?;
        let (g, b) = (md.g.to_ratfunc(), md.b.to_ratfunc());
        let (kp, km) = self.k_maps();
        let one = RatMatrix::identity(self.rank(), self.ctx());
        let left = kp.to_ratfunc().mul(&f.mul(&g.add(&b)).mul(&md.j_plus.to_ratfunc())).neg();
        let right = f.mul(&g.sub(&b)).mul(&md.j_minus.to_ratfunc()).mul(&km.to_ratfunc()).neg();
        let mut r = Report::default();
        for (label, m) in [("K+ inverse", left), ("K- inverse", right)] {
            r.checked.push(label.into());
            if let Some((row, col, v)) = m.sub(&one).first_nonzero() {
                r.violations.push(Violation { label: label.into(), row, col, value: v.to_string() });
            }
        }
        Ok(r)
    }

    /// The eight compatibility conditions for the coordinate foliation
    /// spanned by `d/dx_i`, `i` in `p` (0-based).
    pub fn compatibility(&self, p: &[usize]) -> Result<Report, KahlerError> {
        let m = self.rank();
        let inside = foliation_set(p, m)?;
        let outside: BTreeSet<usize> = (0..m).filter(|i| !inside.contains(i)).collect();
        let [j1, j2, j3, j4] = self.j.blocks();
        let [k1, k2, k3, k4] = self.jp.blocks();
        let conds: [(&str, PolyMatrix, &BTreeSet<usize>, &BTreeSet<usize>); 8] = [
            ("C1 J2(Ann P) in P", j2.clone(), &outside, &outside),
            ("C2 J3(P) in Ann P", j3.clone(), &inside, &inside),
            ("C3 J'2(Ann P) in P", k2.clone(), &outside, &outside),
            ("C4 J'3(P) in Ann P", k3.clone(), &inside, &inside),
            ("C5 J1 J'1(P) in P", j1.mul(k1), &outside, &inside),
            ("C6 J'1 J1(P) in P", k1.mul(j1), &outside, &inside),
            ("C7 J4 J'4(Ann P) in Ann P", j4.mul(k4), &inside, &outside),
            ("C8 J'4 J4(Ann P) in Ann P", k4.mul(j4), &inside, &outside),
        ];
        let mut r = Report::default();
        for (label, mat, rows, cols) in conds {
            r.checked.push(label.into());
            let hit = rows.iter().flat_map(|&i| cols.iter().map(move |&k| (i, k))).find(|&(i, k)| !mat.get(i, k).is_zero());
            if let Some((row, col)) = hit {
                r.violations.push(Violation { label: label.into(), row, col, value: mat.get(row, col).to_canonical() });
            }
        }
        Ok(r)
    }

    /// The common complement `Q = K+(P)`, as columns.
    pub fn j_compliment(&self, p: &[usize]) -> Result<PolyMatrix, KahlerError> {
        let c = self.compatibility(p)?;
        if !c.is_valid() {
            return Err(KahlerError::Incompatible(c.failed_labels().iter().map(|s| s.to_string()).collect()));
        }
        let m = self.rank();
        let inside = foliation_set(p, m)?;
        let (kp, km) = self.k_maps();
        let cols: Vec<usize> = inside.iter().copied().collect();
        let q = PolyMatrix::from_cols(self.ctx(), m, &cols.iter().map(|&i| kp.col(i)).collect::<Vec<_>>());
        let qm = PolyMatrix::from_cols(self.ctx(), m, &cols.iter().map(|&i| km.col(i)).collect::<Vec<_>>());
        let both = PolyMatrix::from_blocks(&[vec![&q, &qm]]);
        if q.rank() != cols.len() || both.rank() != cols.len() {
            return Err(KahlerError::FormulaMismatch("K-(P)"));
        }
        let gq = self.extract_metric_data()?.g3().mul(&q);
        if cols.iter().any(|&i| gq.row(i).iter().any(|v| !v.is_zero())) {
            return Err(KahlerError::FormulaMismatch("G3-orthogonality"));
        }
        Ok(q)
    }
}

fn foliation_set(p: &[usize], m: usize) -> Result<BTreeSet<usize>, KahlerError> {
    let mut s = BTreeSet::new();
    for &i in p {
        if i >= m || !s.insert(i) {
            return Err(KahlerError::Foliation(i));
        }
    }
    Ok(s)
}

/// `(g, b, J+, J-)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricData {
    pub g: PolyMatrix,
    pub b: PolyMatrix,
    pub j_plus: PolyMatrix,
    pub j_minus: PolyMatrix,
}

impl MetricData {
    /// Symmetry of `g`, antisymmetry of `b`, `J+-^2 = -1` and antisymmetry of `g J+-`.
    pub fn validate(&self) -> Report {
        let mut r = Report::default();
        let one = PolyMatrix::identity(self.g.rows(), self.g.ctx());
        r.expect_zero("g symmetric", &self.g.sub(&self.g.transpose()));
        r.expect_zero("b antisymmetric", &self.b.add(&self.b.transpose()));
        for (tag, j) in [("J+", &self.j_plus), ("J-", &self.j_minus)] {
            r.expect_zero(&format!("{tag}^2 = -1"), &j.mul(j).add(&one));
            let w = self.g.mul(j);
            r.expect_zero(&format!("g {tag} antisymmetric"), &w.add(&w.transpose()));
        }
        r
    }

    /// `g - b g^{-1} b`.
    pub fn g3(&self) -> PolyMatrix {
        self.try_g3().expect("g3 on singular metric")
    }

    fn try_g3(&self) -> Result<PolyMatrix, KahlerError> {
        let ginv = rat_inverse(&self.g, "g")?;
        let b = self.b.to_ratfunc();
        to_poly(&self.g.to_ratfunc().sub(&b.mul(&ginv).mul(&b)), "g - b g^-1 b")
    }

    /// `G = [[-g^{-1} b, g^{-1}], [g - b g^{-1} b, b g^{-1}]]`.
    pub fn metric_operator(&self) -> Result<PolyMatrix, KahlerError> {
        let ginv = rat_inverse(&self.g, "g")?;
        let b = self.b.to_ratfunc();
        let gi = to_poly(&ginv, "g^-1")?;
        let tl = to_poly(&ginv.mul(&b).neg(), "g^-1 b")?;
        let br = to_poly(&b.mul(&ginv), "b g^-1")?;
        let g3 = self.try_g3()?;
        Ok(PolyMatrix::from_blocks(&[vec![&tl, &gi], vec![&g3, &br]]))
    }

    /// The pair `(J, J')` built from `(g, b, J+, J-)`.
    pub fn reconstruct(&self) -> Result<GKPair, KahlerError> {
        let r = self.validate();
        if !r.is_valid() {
            return Err(KahlerError::Invalid(r.failed_labels().iter().map(|s| s.to_string()).collect()));
        }
        let ctx = self.g.ctx().clone();
        let m = self.g.rows();
        let wp = self.g.mul(&self.j_plus);
        let wm = self.g.mul(&self.j_minus);
        let wpi = to_poly(&rat_inverse(&wp, "omega+")?, "omega+^-1")?;
        let wmi = to_poly(&rat_inverse(&wm, "omega-")?, "omega-^-1")?;
        let half = GaussRational::from_frac(1, 2);
        let one = PolyMatrix::identity(m, &ctx);
        let z = PolyMatrix::zeros(m, m, &ctx);
        let e_b = PolyMatrix::from_blocks(&[vec![&one, &z], vec![&self.b, &one]]);
        let nb = self.b.neg();
        let e_nb = PolyMatrix::from_blocks(&[vec![&one, &z], vec![&nb, &one]]);
        let build = |sign: i64| -> Result<GCStructure, KahlerError> {
            // diagonal blocks pair J+ with sign * J-, off-diagonal with -sign
            let s = |m: &PolyMatrix| if sign > 0 { m.clone() } else { m.neg() };
            let tl = self.j_plus.add(&s(&self.j_minus));
            let tr = wpi.sub(&s(&wmi)).neg();
            let bl = wp.sub(&s(&wm));
            let br = self.j_plus.transpose().add(&s(&self.j_minus.transpose())).neg();
            let mid = PolyMatrix::from_blocks(&[vec![&tl, &tr], vec![&bl, &br]]);
            let full = e_b.mul(&mid).mul(&e_nb).map(&ctx, |p| p.scale(&half));
            Ok(GCStructure::from_full(&full)?)
        };
        GKPair::new(build(1)?, build(-1)?)
    }
}

/// The six base blocks of `-J J'` for a semi-flat pair.
#[derive(Clone, Debug, PartialEq)]
pub struct GBlocks {
    pub g11: PolyMatrix,
    pub g21: PolyMatrix,
    pub g14: PolyMatrix,
    pub g24: PolyMatrix,
    pub g31: PolyMatrix,
    pub g34: PolyMatrix,
}

impl GBlocks {
    /// The operator on `V + T + V^* + T^*`.
    pub fn assemble(&self) -> PolyMatrix {
        let z = PolyMatrix::zeros(self.g11.rows(), self.g11.rows(), self.g11.ctx());
        let (g11t, g14t) = (self.g11.transpose(), self.g14.transpose());
        PolyMatrix::from_blocks(&[
            vec![&self.g11, &z, &self.g21, &z],
            vec![&z, &self.g14, &z, &self.g24],
            vec![&self.g31, &z, &g11t, &z],
            vec![&z, &self.g34, &z, &g14t],
        ])
    }

    /// Exchanges `G11` with its transpose and `G21` with `G31`.
    pub fn mirror(&self) -> Self {
        GBlocks {
            g11: self.g11.transpose(),
            g21: self.g31.clone(),
            g14: self.g14.clone(),
            g24: self.g24.clone(),
            g31: self.g21.clone(),
            g34: self.g34.clone(),
        }
    }

    /// Fiber metric and B-field `(h, B) = (G21^{-1}, G11^T G21^{-1})` and their
    /// mirror values `(G31^{-1}, G11 G31^{-1})`.
    pub fn fiber_fields(&self) -> Result<[RatMatrix; 4], KahlerError> {
        let h = rat_inverse(&self.g21, "G21")?;
        let hh = rat_inverse(&self.g31, "G31")?;
        let b = self.g11.transpose().to_ratfunc().mul(&h);
        let bh = self.g11.to_ratfunc().mul(&hh);
        Ok([h, b, hh, bh])
    }

    /// `(h+B) h^ (h-B) = h` and `(h+B) B^ (h-B) = -B`.
    pub fn buscher_check(&self) -> Result<Report, KahlerError> {
        rat_inverse(&self.g24, "G24")?;
        let [h, b, hh, bh] = self.fiber_fields()?;
        Ok(buscher_residuals(&h, &b, &hh, &bh))
    }
}

fn buscher_residuals(h: &RatMatrix, b: &RatMatrix, hh: &RatMatrix, bh: &RatMatrix) -> Report {
    let (p, m) = (h.add(b), h.sub(b));
    let mut r = Report::default();
    for (label, res) in [
        ("(h+B) h^ (h-B) = h", p.mul(hh).mul(&m).sub(h)),
        ("(h+B) B^ (h-B) = -B", p.mul(bh).mul(&m).add(b)),
    ] {
        r.checked.push(label.into());
        if let Some((row, col, v)) = res.first_nonzero() {
            r.violations.push(Violation { label: label.into(), row, col, value: v.to_string() });
        }
    }
    r
}

/// Solves the Buscher rules for `(h^, B^)`.
pub fn buscher_transform(h: &RatMatrix, b: &RatMatrix) -> Result<(RatMatrix, RatMatrix), KahlerError> {
    let p = h.add(b).inverse().ok_or(KahlerError::Singular("h + B"))?;
    let m = h.sub(b).inverse().ok_or(KahlerError::Singular("h - B"))?;
    Ok((p.mul(h).mul(&m), p.mul(b).mul(&m).neg()))
}

/// Residuals of the Buscher rules for given values.
pub fn buscher_rules(h: &RatMatrix, b: &RatMatrix, hh: &RatMatrix, bh: &RatMatrix) -> Report {
    buscher_residuals(h, b, hh, bh)
}

/// A semi-flat pair of adapted structures.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiflatPair {
    pub j: AdaptedBlocks,
    pub jp: AdaptedBlocks,
}

impl SemiflatPair {
    pub fn new(j: AdaptedBlocks, jp: AdaptedBlocks) -> Result<Self, KahlerError> {
        if j.n() != jp.n() || j.chart().n_vars() != jp.chart().n_vars() {
            return Err(KahlerError::Mismatch);
        }
        Ok(SemiflatPair { j, jp })
    }

    pub fn lift(&self) -> Result<GKPair, KahlerError> {
        GKPair::new(self.j.lift()?, self.jp.lift()?)
    }

    pub fn mirror(&self) -> Self {
        SemiflatPair { j: self.j.mirror(), jp: self.jp.mirror() }
    }

    /// Validation of the lifted pair; samples are base points.
    pub fn validate(&self, samples: &[Vec<GaussRational>]) -> Result<Report, KahlerError> {
        self.lift()?.validate(samples)
    }

    /// `-J J'` on `V + T + V^* + T^*`.
    pub fn metric_operator(&self) -> PolyMatrix {
        self.j.underline().mul(&self.jp.underline()).neg()
    }

    /// The blocks by their closed formulas, cross-checked against the product.
    pub fn g_blocks(&self) -> Result<GBlocks, KahlerError> {
        let [a, b, c, d] = self.j.blocks();
        let [a2, b2, c2, d2] = self.jp.blocks();
        let t = |m: &PolyMatrix| m.transpose();
        let gb = GBlocks {
            g11: a.mul(b2).neg().add(&c.mul(&t(d2))),
            g21: a.mul(&t(c2)).add(&c.mul(&t(a2))),
            g14: b.mul(a2).neg().add(&t(c).mul(d2)),
            g24: b.mul(c2).neg().sub(&t(c).mul(&t(b2))),
            g31: d.mul(b2).neg().sub(&t(b).mul(&t(d2))),
            g34: t(d).mul(a2).add(&t(a).mul(d2)),
        };
        if gb.assemble() != self.metric_operator() {
            return Err(KahlerError::FormulaMismatch("G blocks"));
        }
        Ok(gb)
    }

    /// `J+` and `J-` on `V + T` from the blocks and `G`:
    /// `J+- = [[0, J12 + J22 (G14^T +- 1) G24^{-1}], [J13 - J22^T (G11^T +- 1) G21^{-1}, 0]]`.
    pub fn j_pm(&self) -> Result<(RatMatrix, RatMatrix), KahlerError> {
        let gb = self.g_blocks()?;
        let n = self.j.n();
        let ctx = self.j.base().clone();
        let g21i = rat_inverse(&gb.g21, "G21")?;
        let g24i = rat_inverse(&gb.g24, "G24")?;
        let [a, b, c, _] = self.j.blocks();
        let one = RatMatrix::identity(n, &ctx);
        let z = RatMatrix::zeros(n, n, &ctx);
        let (a, b, c) = (a.to_ratfunc(), b.to_ratfunc(), c.to_ratfunc());
        let (g11t, g14t) = (gb.g11.transpose().to_ratfunc(), gb.g14.transpose().to_ratfunc());
        let one_sided = |s: &RatMatrix| {
            let top = a.add(&c.mul(&g14t.add(s)).mul(&g24i));
            let bot = b.sub(&c.transpose().mul(&g11t.add(s)).mul(&g21i));
            RatMatrix::from_blocks(&[vec![&z, &top], vec![&bot, &z]])
        };
        Ok((one_sided(&one), one_sided(&one.neg())))
    }
}
