//! Dense matrices over the exact coefficient rings.

use crate::scalar::{same_ctx, Ctx, GaussRational, Poly, RatFunc};
use std::fmt;

/// Commutative ring operations needed by [`Matrix`].
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Ctx: Clone + fmt::Debug + Send + Sync;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn ctx_of(&self) -> Self::Ctx;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Quotient when `o` divides `self` exactly.
    fn div_exact(&self, o: &Self) -> Option<Self>;
    /// Inverse when `self` is a unit.
    fn inv(&self) -> Option<Self>;
}

impl Ring for GaussRational {
    type Ctx = ();
    fn zero(_: &()) -> Self {
        GaussRational::zero()
    }
    fn one(_: &()) -> Self {
        GaussRational::one()
    }
    fn ctx_of(&self) {}
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        GaussRational::is_zero(self)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        o.inv().map(|v| self * &v)
    }
    fn inv(&self) -> Option<Self> {
        GaussRational::inv(self)
    }
}

impl Ring for Poly {
    type Ctx = Ctx;
    fn zero(ctx: &Ctx) -> Self {
        Poly::zero(ctx)
    }
    fn one(ctx: &Ctx) -> Self {
        Poly::one(ctx)
    }
    fn ctx_of(&self) -> Ctx {
        self.ctx().clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        Poly::div_exact(self, o)
    }
    fn inv(&self) -> Option<Self> {
        let c = self.as_constant()?.inv()?;
        Some(Poly::constant(self.ctx(), c))
    }
}

impl Ring for RatFunc {
    type Ctx = Ctx;
    fn zero(ctx: &Ctx) -> Self {
        RatFunc::from_poly(Poly::zero(ctx))
    }
    fn one(ctx: &Ctx) -> Self {
        RatFunc::from_poly(Poly::one(ctx))
    }
    fn ctx_of(&self) -> Ctx {
        self.numer().ctx().clone()
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::add(self, &o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        o.inv().map(|v| RatFunc::mul(self, &v))
    }
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }
}

#[derive(Clone)]
pub struct Matrix<T: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    ctx: T::Ctx,
}

impl<T: Ring> PartialEq for Matrix<T> {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data == o.data
    }
}

pub type PolyMatrix = Matrix<Poly>;
pub type ConstMatrix = Matrix<GaussRational>;
pub type RatMatrix = Matrix<RatFunc>;

impl<T: Ring> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl<T: Ring> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, ctx: &T::Ctx, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data, ctx: ctx.clone() }
    }

    /// Builds from row vectors; all rows must have length `cols`.
    pub fn from_rows(ctx: &T::Ctx, cols: usize, rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: n, cols, data, ctx: ctx.clone() }
    }

    pub fn from_cols(ctx: &T::Ctx, rows: usize, cols: &[Vec<T>]) -> Self {
        Matrix::from_fn(rows, cols.len(), ctx, |r, c| cols[c][r].clone())
    }

    pub fn zeros(rows: usize, cols: usize, ctx: &T::Ctx) -> Self {
        Matrix::from_fn(rows, cols, ctx, |_, _| T::zero(ctx))
    }

    pub fn identity(n: usize, ctx: &T::Ctx) -> Self {
        Matrix::from_fn(n, n, ctx, |r, c| if r == c { T::one(ctx) } else { T::zero(ctx) })
    }

    pub fn scalar(n: usize, v: &T) -> Self {
        let ctx = v.ctx_of();
        Matrix::from_fn(n, n, &ctx, |r, c| if r == c { v.clone() } else { T::zero(&ctx) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data.iter().enumerate().map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn map<U: Ring>(&self, ctx: &U::Ctx, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), ctx: ctx.clone() }
    }

    pub fn try_map<U: Ring, E>(&self, ctx: &U::Ctx, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data, ctx: ctx.clone() })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, &self.ctx, |r, c| self.get(c, r).clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        Matrix::from_fn(self.rows, self.cols, &self.ctx, |r, c| self.get(r, c).add(o.get(r, c)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        Matrix::from_fn(self.rows, self.cols, &self.ctx, |r, c| self.get(r, c).sub(o.get(r, c)))
    }

    pub fn neg(&self) -> Self {
        self.map(&self.ctx, |v| v.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(&self.ctx, |v| v.mul(s))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, o.cols, &self.ctx);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c).add(&a.mul(b));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero(&self.ctx);
                for (c, x) in v.iter().enumerate() {
                    let a = self.get(r, c);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.rows, &self.ctx) && self.is_square()
    }

    /// First entry (row-major) that is nonzero.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &T)> {
        self.entries().find(|(_, _, v)| !v.is_zero())
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        Matrix::from_fn(h, w, &self.ctx, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    /// Assembles a block matrix; `grid[i][j]` is the block in block-row `i`.
    pub fn from_blocks(grid: &[Vec<&Matrix<T>>]) -> Self {
        let ctx = grid[0][0].ctx.clone();
        let heights: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let (h, w) = (heights.iter().sum(), widths.iter().sum());
        let mut out = Matrix::zeros(h, w, &ctx);
        let mut r0 = 0;
        for (i, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (j, b) in row.iter().enumerate() {
                assert_eq!((b.rows, b.cols), (heights[i], widths[j]), "block shape mismatch");
                for r in 0..b.rows {
                    for c in 0..b.cols {
                        out.set(r0 + r, c0 + c, b.get(r, c).clone());
                    }
                }
                c0 += widths[j];
            }
            r0 += heights[i];
        }
        out
    }

    /// Reorders rows and columns: entry `(r, c)` of the result is entry
    /// `(perm[r], perm[c])` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        Matrix::from_fn(self.rows, self.cols, &self.ctx, |r, c| self.get(perm[r], perm[c]).clone())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && self.transpose() == self.neg()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.transpose() == *self
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one(&self.ctx);
        }
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = T::one(&self.ctx);
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !m.get(r, k).is_zero()) {
                    Some(p) => {
                        m.swap_rows(k, p);
                        sign = !sign;
                    }
                    None => return T::zero(&self.ctx),
                }
            }
            let piv = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = piv.mul(m.get(i, j)).sub(&m.get(i, k).mul(m.get(k, j)));
                    let v = v.div_exact(&prev).expect("Bareiss division is exact");
                    m.set(i, j, v);
                }
                m.set(i, k, T::zero(&self.ctx));
            }
            prev = piv;
        }
        let d = m.get(n - 1, n - 1).clone();
        if sign {
            d.neg()
        } else {
            d
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Rank over the fraction field, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut prev = T::one(&self.ctx);
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let piv = m.get(r, c).clone();
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let v = piv.mul(m.get(i, j)).sub(&m.get(i, c).mul(m.get(r, j)));
                    let v = v.div_exact(&prev).expect("Bareiss division is exact");
                    m.set(i, j, v);
                }
                m.set(i, c, T::zero(&self.ctx));
            }
            prev = piv;
            r += 1;
        }
        r
    }

    pub fn minor(&self, skip_r: usize, skip_c: usize) -> Self {
        Matrix::from_fn(self.rows - 1, self.cols - 1, &self.ctx, |r, c| {
            let rr = if r < skip_r { r } else { r + 1 };
            let cc = if c < skip_c { c } else { c + 1 };
            self.get(rr, cc).clone()
        })
    }

    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        if n == 1 {
            return Matrix::identity(1, &self.ctx);
        }
        Matrix::from_fn(n, n, &self.ctx, |r, c| {
            let d = self.minor(c, r).det();
            if (r + c) % 2 == 1 {
                d.neg()
            } else {
                d
            }
        })
    }

    /// Inverse when the determinant is a unit of the ring.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let dinv = self.det().inv()?;
        Some(self.adjugate().scale(&dinv))
    }

    /// Basis of the right kernel. Only meaningful over a field.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nullspace needs a field");
            for j in 0..self.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..self.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![T::zero(&self.ctx); self.cols];
            v[free] = T::one(&self.ctx);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = m.get(row, free).neg();
            }
            basis.push(v);
        }
        basis
    }
}

impl PolyMatrix {
    pub fn parse_rows(ctx: &Ctx, rows: &[Vec<&str>]) -> Result<Self, crate::scalar::ScalarError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|s| Poly::parse(ctx, s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_rows(ctx, cols, data))
    }

    pub fn from_int_rows(ctx: &Ctx, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(ctx, cols, rows.iter().map(|r| r.iter().map(|&v| Poly::int(ctx, v)).collect()).collect())
    }

    /// Constant entries as Gaussian rationals, if every entry is constant.
    pub fn to_const(&self) -> Option<ConstMatrix> {
        let data = self.data.iter().map(|p| p.as_constant()).collect::<Option<Vec<_>>>()?;
        Some(Matrix { rows: self.rows, cols: self.cols, data, ctx: () })
    }

    pub fn to_ratfunc(&self) -> RatMatrix {
        self.map(&self.ctx, |p| RatFunc::from_poly(p.clone()))
    }

    pub fn partial(&self, var: usize) -> Self {
        self.map(&self.ctx, |p| p.partial(var))
    }

    pub fn max_degree(&self) -> u32 {
        self.data.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.data.iter().all(|p| p.as_constant().is_some())
    }

    pub fn same_ctx(&self, o: &Self) -> bool {
        same_ctx(&self.ctx, &o.ctx)
    }

    /// Row-major canonical strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|p| p.to_canonical()).collect()).collect()
    }

    pub fn substitute(&self, values: &[(usize, GaussRational)]) -> Self {
        self.map(&self.ctx, |p| p.substitute(values))
    }
}

impl ConstMatrix {
    pub fn to_poly(&self, ctx: &Ctx) -> PolyMatrix {
        self.map(ctx, |c| Poly::constant(ctx, c.clone()))
    }
}

impl RatMatrix {
    /// Polynomial entries, if every denominator has cancelled.
    pub fn to_poly(&self) -> Option<PolyMatrix> {
        self.try_map(&self.ctx, |r| r.as_poly().ok_or(())).ok()
    }
}

impl<T: Ring> fmt::Display for Matrix<T>
where
    T: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
