//! Brackets of sections of `T + T^*` over a polynomial coordinate chart, and
//! the two integrability tests built on them.

use crate::exterior::{ExteriorError, GradedElement, Kind};
use crate::gcs::GCStructure;
use crate::matrix::PolyMatrix;
use crate::scalar::{same_ctx, Ctx, GaussRational, Poly};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CourantError {
    #[error("sections live on different charts")]
    ChartMismatch,
    #[error("structure has rank {got}, chart has dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("the zero form has no integrability condition")]
    ZeroSpinor,
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// `X + xi` with components indexed by the chart coordinates.
#[derive(Clone, PartialEq)]
pub struct GeneralizedSection {
    ctx: Ctx,
    pub x: Vec<Poly>,
    pub xi: Vec<Poly>,
}

impl GeneralizedSection {
    pub fn zero(ctx: &Ctx) -> Self {
        let n = ctx.n_vars();
        GeneralizedSection { ctx: ctx.clone(), x: vec![Poly::zero(ctx); n], xi: vec![Poly::zero(ctx); n] }
    }

    pub fn new(ctx: &Ctx, x: Vec<Poly>, xi: Vec<Poly>) -> Self {
        assert_eq!(x.len(), ctx.n_vars());
        assert_eq!(xi.len(), ctx.n_vars());
        GeneralizedSection { ctx: ctx.clone(), x, xi }
    }

    /// The k-th frame section: `d/dx_k` for `k < n`, then `dx_{k-n}`.
    pub fn frame(ctx: &Ctx, k: usize) -> Self {
        let n = ctx.n_vars();
        let mut s = GeneralizedSection::zero(ctx);
        if k < n {
            s.x[k] = Poly::one(ctx);
        } else {
            s.xi[k - n] = Poly::one(ctx);
        }
        s
    }

    pub fn vector(ctx: &Ctx, x: Vec<Poly>) -> Self {
        GeneralizedSection::new(ctx, x, vec![Poly::zero(ctx); ctx.n_vars()])
    }

    pub fn form(ctx: &Ctx, xi: Vec<Poly>) -> Self {
        GeneralizedSection::new(ctx, vec![Poly::zero(ctx); ctx.n_vars()], xi)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().chain(&self.xi).all(|p| p.is_zero())
    }

    /// Components stacked as `(X; xi)`.
    pub fn stacked(&self) -> Vec<Poly> {
        self.x.iter().chain(&self.xi).cloned().collect()
    }

    pub fn from_stacked(ctx: &Ctx, v: Vec<Poly>) -> Self {
        let n = ctx.n_vars();
        let xi = v[n..].to_vec();
        let mut x = v;
        x.truncate(n);
        GeneralizedSection::new(ctx, x, xi)
    }

    pub fn add(&self, o: &Self) -> Self {
        GeneralizedSection {
            ctx: self.ctx.clone(),
            x: self.x.iter().zip(&o.x).map(|(a, b)| a + b).collect(),
            xi: self.xi.iter().zip(&o.xi).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Poly::int(&self.ctx, -1)))
    }

    pub fn scale(&self, f: &Poly) -> Self {
        GeneralizedSection {
            ctx: self.ctx.clone(),
            x: self.x.iter().map(|a| a * f).collect(),
            xi: self.xi.iter().map(|a| a * f).collect(),
        }
    }

    /// `J` applied to the stacked components.
    pub fn apply(&self, j: &PolyMatrix) -> Self {
        GeneralizedSection::from_stacked(&self.ctx, j.apply(&self.stacked()))
    }

    /// The pairing `-1/2 (xi(Y) + eta(X))`.
    pub fn pairing(&self, o: &Self) -> Poly {
        let s = &contract_vec(&self.x, &o.xi) + &contract_vec(&o.x, &self.xi);
        s.scale(&GaussRational::from_frac(-1, 2))
    }

    fn check(&self, o: &Self) -> Result<(), CourantError> {
        if same_ctx(&self.ctx, &o.ctx) {
            Ok(())
        } else {
            Err(CourantError::ChartMismatch)
        }
    }
}

impl fmt::Debug for GeneralizedSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x: Vec<String> = self.x.iter().map(|p| p.to_canonical()).collect();
        let xi: Vec<String> = self.xi.iter().map(|p| p.to_canonical()).collect();
        write!(f, "Section(X={x:?}, xi={xi:?})")
    }
}

fn contract_vec(x: &[Poly], eta: &[Poly]) -> Poly {
    let ctx = x[0].ctx();
    x.iter().zip(eta).fold(Poly::zero(ctx), |acc, (a, b)| &acc + &(a * b))
}

/// `X(f)`.
fn directional(x: &[Poly], f: &Poly) -> Poly {
    let ctx = f.ctx();
    x.iter().enumerate().fold(Poly::zero(ctx), |acc, (j, xj)| if xj.is_zero() { acc } else { &acc + &(xj * &f.partial(j)) })
}

fn gradient(f: &Poly) -> Vec<Poly> {
    (0..f.ctx().n_vars()).map(|k| f.partial(k)).collect()
}

/// `[X, Y]^k = X(Y^k) - Y(X^k)`.
pub fn lie_bracket(x: &[Poly], y: &[Poly]) -> Vec<Poly> {
    x.iter().zip(y).map(|(xk, yk)| &directional(x, yk) - &directional(y, xk)).collect()
}

/// `(L_X eta)_k = X(eta_k) + eta_j d_k X^j`.
pub fn lie_derivative(x: &[Poly], eta: &[Poly]) -> Vec<Poly> {
    (0..eta.len())
        .map(|k| {
            let mut acc = directional(x, &eta[k]);
            for (j, xj) in x.iter().enumerate() {
                if !eta[j].is_zero() {
                    acc = &acc + &(&eta[j] * &xj.partial(k));
                }
            }
            acc
        })
        .collect()
}

/// `[X+xi, Y+eta] = [X,Y] + L_X eta - L_Y xi + 1/2 d(iota_Y xi - iota_X eta)`.
pub fn courant_bracket(u: &GeneralizedSection, w: &GeneralizedSection) -> Result<GeneralizedSection, CourantError> {
    u.check(w)?;
    let x = lie_bracket(&u.x, &w.x);
    let lx = lie_derivative(&u.x, &w.xi);
    let ly = lie_derivative(&w.x, &u.xi);
    let half = (&contract_vec(&w.x, &u.xi) - &contract_vec(&u.x, &w.xi)).scale(&GaussRational::from_frac(1, 2));
    let dh = gradient(&half);
    let xi = (0..lx.len()).map(|k| &(&lx[k] - &ly[k]) + &dh[k]).collect();
    Ok(GeneralizedSection { ctx: u.ctx.clone(), x, xi })
}

fn check_structure(j: &GCStructure, ctx: &Ctx) -> Result<(), CourantError> {
    if !same_ctx(j.ctx(), ctx) {
        return Err(CourantError::ChartMismatch);
    }
    if j.rank() != ctx.n_vars() {
        return Err(CourantError::Dimension { expected: ctx.n_vars(), got: j.rank() });
    }
    Ok(())
}

fn nijenhuis_full(j: &PolyMatrix, u: &GeneralizedSection, w: &GeneralizedSection) -> Result<GeneralizedSection, CourantError> {
    let ju = u.apply(j);
    let jw = w.apply(j);
    let a = courant_bracket(&ju, &jw)?;
    let b = courant_bracket(&ju, w)?.apply(j);
    let c = courant_bracket(u, &jw)?.apply(j);
    let d = courant_bracket(u, w)?;
    Ok(a.sub(&b).sub(&c).sub(&d))
}

/// `N(u,w) = [Ju,Jw] - J[Ju,w] - J[u,Jw] - [u,w]`.
pub fn nijenhuis_tensor(
    j: &GCStructure,
    u: &GeneralizedSection,
    w: &GeneralizedSection,
) -> Result<GeneralizedSection, CourantError> {
    check_structure(j, u.ctx())?;
    u.check(w)?;
    nijenhuis_full(&j.full(), u, w)
}

/// A nonvanishing value found on a pair of sections.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub left: String,
    pub right: String,
    /// Components `(X; xi)` in canonical text.
    pub value: Vec<String>,
}

/// Outcome of a pairwise test; the witness is the first failing pair in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketVerdict {
    pub integrable: bool,
    pub pairs_checked: usize,
    pub witness: Option<Witness>,
}

impl BracketVerdict {
    /// Evaluates `f` on all pairs `i < j` in parallel and keeps the first nonzero value.
    pub(crate) fn over_pairs<E: Send>(
        labels: &[String],
        f: impl Fn(usize, usize) -> Result<GeneralizedSection, E> + Sync,
    ) -> Result<Self, E> {
        let dim = labels.len();
        let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|a| (a + 1..dim).map(move |b| (a, b))).collect();
        let values = pairs.par_iter().map(|&(a, b)| f(a, b)).collect::<Result<Vec<_>, _>>()?;
        let witness = pairs.iter().zip(&values).find(|(_, v)| !v.is_zero()).map(|(&(a, b), v)| Witness {
            left: labels[a].clone(),
            right: labels[b].clone(),
            value: v.stacked().iter().map(|p| p.to_canonical()).collect(),
        });
        Ok(BracketVerdict { integrable: witness.is_none(), pairs_checked: pairs.len(), witness })
    }
}

/// Labels for [`GeneralizedSection::frame`]: `d/dx1`, ..., `dx1`, ...
pub fn frame_labels(ctx: &Ctx) -> Vec<String> {
    let n = ctx.n_vars();
    (0..n).map(|k| format!("d/d{}", ctx.var_name(k))).chain((0..n).map(|k| format!("d{}", ctx.var_name(k)))).collect()
}

/// Evaluates the tensor on every pair of coordinate frame sections.
pub fn integrability_by_nijenhuis(j: &GCStructure) -> Result<BracketVerdict, CourantError> {
    let ctx = j.ctx().clone();
    check_structure(j, &ctx)?;
    let full = j.full();
    BracketVerdict::over_pairs(&frame_labels(&ctx), |a, b| {
        nijenhuis_full(&full, &GeneralizedSection::frame(&ctx, a), &GeneralizedSection::frame(&ctx, b))
    })
}

/// Decides whether `d phi = iota_v phi + alpha ^ phi` has a solution `(v, alpha)`
/// with coefficients in the fraction field of the chart's polynomial ring.
pub fn spinor_integrability(phi: &GradedElement) -> Result<bool, CourantError> {
    if phi.is_zero() {
        return Err(CourantError::ZeroSpinor);
    }
    let dphi = phi.d()?;
    if dphi.is_zero() {
        return Ok(true);
    }
    let gens = phi.gens().clone();
    let mut columns = Vec::new();
    for (k, g) in gens.generators().iter().enumerate() {
        if g.kind != Kind::Covector {
            continue;
        }
        if let Some(p) = g.partner {
            columns.push(phi.contract_gen(p)?);
        }
        columns.push(GradedElement::generator(&gens, k).wedge(phi)?);
    }
    let mut blades: Vec<_> = columns.iter().chain([&dphi]).flat_map(|c| c.terms().map(|(b, _)| *b)).collect();
    blades.sort();
    blades.dedup();
    let ctx = phi.ctx().clone();
    let system = |with_rhs: bool| {
        let mut cols: Vec<Vec<Poly>> = columns.iter().map(|c| blades.iter().map(|b| c.coeff(*b)).collect()).collect();
        if with_rhs {
            cols.push(blades.iter().map(|b| dphi.coeff(*b)).collect());
        }
        PolyMatrix::from_cols(&ctx, blades.len(), &cols)
    };
    Ok(system(false).rank() == system(true).rank())
}
