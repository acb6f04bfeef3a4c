//! Fourier transforms of mixed forms: the fiberwise transform with kernel
//! `exp(kappa)` and the torus-bundle version with kernel `exp(sum dxi ^ deta)`.

use crate::exterior::{proportionality, Blade, ExteriorError, GeneratorSet, Gens, GradedElement};
use crate::gcs::{GCStructure, GcsError};
use crate::report::{Report, Violation};
use crate::scalar::{Context, Ctx, Poly, ScalarError};
use crate::semiflat::AdaptedBlocks;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FourierError {
    #[error("coefficient depends on the fiber: {0}")]
    FiberDependence(String),
    #[error("generator '{0}' is not allowed here")]
    WrongGenerator(String),
    #[error("expected generators of a Fourier frame")]
    NotAFrame,
    #[error("trivialization must be nonzero")]
    ZeroTrivialization,
    #[error("blocks must be constant")]
    NotConstant,
    #[error("no generator 'd{0}' in the input")]
    MissingDifferential(String),
    #[error("{0} dual names for {1} fiber coordinates")]
    DualNames(usize, usize),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Gcs(#[from] GcsError),
}

/// Generators `e_k` (V), `f_k` (V^*) for `k = 1..rank`, then `px`/`dx` for
/// every coordinate of the base context.
#[derive(Clone, Debug)]
pub struct FourierFrame {
    gens: Gens,
    rank: usize,
}

impl FourierFrame {
    pub fn new(base: &Ctx, rank: usize) -> Result<Self, FourierError> {
        let mut b = GeneratorSet::builder(base);
        for k in 1..=rank {
            b = b.pair(&format!("e{k}"), &format!("f{k}"));
        }
        for i in 0..base.n_vars() {
            b = b.coordinate(base.var_name(i))?;
        }
        Ok(FourierFrame { gens: b.build()?, rank })
    }

    pub fn gens(&self) -> &Gens {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ctx(&self) -> &Ctx {
        self.gens.ctx()
    }

    /// Index of `e_{k+1}`.
    pub fn e(&self, k: usize) -> usize {
        2 * k
    }

    /// Index of `f_{k+1}`.
    pub fn f(&self, k: usize) -> usize {
        2 * k + 1
    }

    /// Index of the vector field of base coordinate `i`.
    pub fn px(&self, i: usize) -> usize {
        2 * self.rank + 2 * i
    }

    /// Index of the differential of base coordinate `i`.
    pub fn dx(&self, i: usize) -> usize {
        2 * self.rank + 2 * i + 1
    }

    fn mask(&self, idx: impl Iterator<Item = usize>) -> u64 {
        idx.fold(0, |m, i| m | 1 << i)
    }

    fn e_mask(&self) -> u64 {
        self.mask((0..self.rank).map(|k| self.e(k)))
    }

    fn f_mask(&self) -> u64 {
        self.mask((0..self.rank).map(|k| self.f(k)))
    }

    fn px_mask(&self) -> u64 {
        self.mask((0..self.ctx().n_vars()).map(|i| self.px(i)))
    }

    /// `kappa = sum_k e_k ^ f_k`.
    pub fn kappa(&self) -> GradedElement {
        (0..self.rank).fold(GradedElement::zero(&self.gens), |acc, k| {
            acc.add(&GradedElement::monomial(&self.gens, Poly::one(self.ctx()), &[self.e(k), self.f(k)])).unwrap()
        })
    }

    fn check_input(&self, phi: &GradedElement, forbidden: u64) -> Result<(), FourierError> {
        if !std::sync::Arc::ptr_eq(phi.gens(), &self.gens) && phi.gens().generators() != self.gens.generators() {
            return Err(FourierError::NotAFrame);
        }
        for (b, c) in phi.terms() {
            if b.0 & forbidden != 0 {
                let k = (b.0 & forbidden).trailing_zeros() as usize;
                return Err(FourierError::WrongGenerator(self.gens.get(k).name.clone()));
            }
            if c.has_modes() || c.has_varpi() {
                return Err(FourierError::FiberDependence(c.to_canonical()));
            }
        }
        Ok(())
    }

    /// Keeps the terms containing every generator of `top` and removes them,
    /// after moving them (in increasing order) to the right end.
    fn integrate_right(&self, x: &GradedElement, top: u64) -> GradedElement {
        let mut out = GradedElement::zero(&self.gens);
        for (b, c) in x.terms() {
            if b.0 & top != top {
                continue;
            }
            let rest = b.0 & !top;
            // each top generator passes the remaining generators above it
            let swaps: u32 = Blade(top).indices().iter().map(|&t| (rest >> t).count_ones()).sum();
            out.add_term(Blade(rest), if swaps % 2 == 1 { -c } else { c.clone() });
        }
        out
    }

    /// `phi -> integral(phi ^ exp(kappa))` over the `f` directions, times the
    /// trivialization `triv` of the top power of `V^*`.
    pub fn transform(&self, phi: &GradedElement, triv: &Poly) -> Result<GradedElement, FourierError> {
        self.check_input(phi, self.e_mask() | self.px_mask())?;
        if triv.is_zero() {
            return Err(FourierError::ZeroTrivialization);
        }
        let phi = phi.transfer(&self.gens)?;
        let full = phi.wedge(&self.kappa().exp()?)?;
        Ok(self.integrate_right(&full, self.f_mask()).scale(triv))
    }

    /// Inverse of [`FourierFrame::transform`] with `triv = 1`: integrates
    /// `psi ^ exp(kappa)` over the `e` directions and corrects the sign
    /// `(-1)^(p + floor(n / 2))` on the part of `V^*`-degree `p`.
    pub fn transform_back(&self, psi: &GradedElement) -> Result<GradedElement, FourierError> {
        self.check_input(psi, self.f_mask() | self.px_mask())?;
        let psi = psi.transfer(&self.gens)?;
        let full = psi.wedge(&self.kappa().exp()?)?;
        let raw = self.integrate_right(&full, self.e_mask());
        let n = self.rank as u32;
        let fm = self.f_mask();
        let mut out = GradedElement::zero(&self.gens);
        for (b, c) in raw.terms() {
            let p = (b.0 & fm).count_ones();
            let s = p + n / 2;
            out.add_term(*b, if s % 2 == 1 { -c } else { c.clone() });
        }
        Ok(out)
    }

    /// The four transform identities for given `v` in `V`, `w` in `T`,
    /// `alpha` in `V^*` and `beta` in `T^*`.
    pub fn identities_check(
        &self,
        zeta: &GradedElement,
        v: &GradedElement,
        w: &GradedElement,
        alpha: &GradedElement,
        beta: &GradedElement,
    ) -> Result<Report, FourierError> {
        let one = Poly::one(self.ctx());
        let ft = |x: &GradedElement| self.transform(x, &one);
        let fz = ft(zeta)?;
        let cases = [
            ("(i) FT(iota_v z) = v ^ FT(z)", ft(&zeta.contract(v)?)?, v.wedge(&fz)?),
            ("(ii) FT(iota_w z) = iota_w FT(z)", ft(&zeta.contract(w)?)?, fz.contract(w)?),
            ("(iii) FT(alpha ^ z) = iota_alpha FT(z)", ft(&alpha.wedge(zeta)?)?, fz.contract(alpha)?),
            ("(iv) FT(beta ^ z) = beta ^ FT(z)", ft(&beta.wedge(zeta)?)?, beta.wedge(&fz)?),
        ];
        let mut r = Report::default();
        for (label, left, right) in cases {
            r.checked.push(label.into());
            let diff = left.sub(&right)?;
            if !diff.is_zero() {
                r.violations.push(Violation { label: label.into(), row: 0, col: 0, value: diff.to_canonical() });
            }
        }
        Ok(r)
    }

    /// The spinor line of the structure on `V + T` given by `b`, over `f`, `dx`.
    pub fn spinor_of(&self, b: &AdaptedBlocks) -> Result<GradedElement, FourierError> {
        let j = GCStructure::from_full(&b.underline())?;
        let basis: Vec<usize> = (0..self.rank).map(|k| self.e(k)).chain((0..self.rank).map(|i| self.px(i))).collect();
        Ok(j.pure_spinor_in(&self.gens, &basis)?)
    }

    /// The spinor line of the mirror of `b` on `V^* + T`, over `e`, `dx`.
    pub fn mirror_spinor_of(&self, b: &AdaptedBlocks) -> Result<GradedElement, FourierError> {
        let j = GCStructure::from_full(&b.mirror().underline())?;
        let basis: Vec<usize> = (0..self.rank).map(|k| self.f(k)).chain((0..self.rank).map(|i| self.px(i))).collect();
        Ok(j.pure_spinor_in(&self.gens, &basis)?)
    }
}

/// Whether the transform carries the spinor line of `b` onto the spinor line
/// of its mirror.
pub fn spinor_mirror_check(b: &AdaptedBlocks) -> Result<bool, FourierError> {
    if !b.blocks().iter().all(|m| m.is_constant()) {
        return Err(FourierError::NotConstant);
    }
    let frame = FourierFrame::new(b.base(), b.n())?;
    let phi = frame.spinor_of(b)?;
    let hat = frame.mirror_spinor_of(b)?;
    let img = frame.transform(&phi, &Poly::one(frame.ctx()))?;
    Ok(proportionality(&img, &hat).is_some())
}

/// `name_hat` for every fiber coordinate.
pub fn default_dual_names(ctx: &Ctx) -> Vec<String> {
    ctx.fiber_names().iter().map(|n| format!("{n}_hat")).collect()
}

/// The torus transform. `mu` lives on the coordinates of a periodic chart
/// `(x, xi)`; the result lives on `(x, eta)` with `eta` named by `dual`.
/// The kernel is `exp(sum_i dxi_i ^ deta_i)`; the fiber integral keeps the
/// mode-zero part of the terms containing every `dxi`, after moving
/// `dxi_1 ^ ... ^ dxi_n` to the left end.
pub fn ft_torus(mu: &GradedElement, dual: &[String]) -> Result<GradedElement, FourierError> {
    let ctx = mu.ctx().clone();
    let (nb, nf) = (ctx.n_base(), ctx.n_fiber());
    if dual.len() != nf {
        return Err(FourierError::DualNames(dual.len(), nf));
    }
    let mut wb = GeneratorSet::builder(&ctx);
    for i in 0..ctx.n_vars() {
        wb = wb.coordinate(ctx.var_name(i))?;
    }
    for d in dual {
        wb = wb.external_differential(d);
    }
    let work = wb.build()?;
    for (b, c) in mu.terms() {
        for k in b.indices() {
            let name = &mu.gens().get(k).name;
            if work.index(name).is_none_or(|w| work.get(w).partner.is_some() && work.get(w).coord.is_none()) {
                return Err(FourierError::WrongGenerator(name.clone()));
            }
        }
        if (nb..nb + nf).any(|v| c.uses_var(v)) {
            return Err(FourierError::FiberDependence(c.to_canonical()));
        }
    }
    let mu = mu.transfer(&work)?;
    let dxi: Vec<usize> = (0..nf).map(|j| 2 * (nb + j) + 1).collect();
    let deta: Vec<usize> = (0..nf).map(|j| 2 * (nb + nf) + j).collect();
    let kernel = (0..nf).fold(GradedElement::zero(&work), |acc, j| {
        acc.add(&GradedElement::monomial(&work, Poly::one(&ctx), &[dxi[j], deta[j]])).unwrap()
    });
    let full = mu.wedge(&kernel.exp()?)?;
    let top: u64 = dxi.iter().fold(0, |m, &i| m | 1 << i);
    let out_ctx = Context::new(ctx.base_names().to_vec(), dual.to_vec(), ctx.periodic())?;
    let out_gens = GeneratorSet::coordinates(&out_ctx)?;
    let mut out = GradedElement::zero(&out_gens);
    for (b, c) in full.terms() {
        if b.0 & top != top {
            continue;
        }
        let c0 = c.mode_zero_part();
        if c0.is_zero() {
            continue;
        }
        let rest = b.0 & !top;
        // each dxi passes the generators below it
        let swaps: u32 = dxi.iter().map(|&t| (rest & ((1u64 << t) - 1)).count_ones()).sum();
        let c0 = if swaps % 2 == 1 { -c0 } else { c0 };
        let idx: Vec<usize> = Blade(rest)
            .indices()
            .iter()
            .map(|&k| out_gens.index(&work.get(k).name).ok_or(FourierError::NotAFrame))
            .collect::<Result<_, _>>()?;
        out = out.add(&GradedElement::monomial(&out_gens, c0.transfer(&out_ctx)?, &idx))?;
    }
    Ok(out)
}

/// The local formula with the sign `(-1)^(k_1 + ... + k_{n-b})` over the
/// complementary indices, for `mu` a single term `f theta_J ^ dxi_J` with
/// `theta_J` a base form. Used to compare against [`ft_torus`].
pub fn torus_sign_formula(j: &[usize], n: usize) -> i64 {
    let s: usize = (1..=n).filter(|k| !j.contains(k)).sum();
    if s % 2 == 0 {
        1
    } else {
        -1
    }
}
