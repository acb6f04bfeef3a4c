//! Seeded generators of random structures for the integration tests.
#![allow(dead_code)]

use gcmirror::{AdaptedBlocks, Context, Ctx, GCStructure, GKPair, Poly, PolyMatrix, SemiflatPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn pick<T: Copy>(&mut self, v: &[T]) -> T {
        v[self.rng.gen_range(0..v.len())]
    }

    /// Sparse polynomial of degree at most `deg` in the first `nvars` variables.
    pub fn poly(&mut self, ctx: &Ctx, nvars: usize, deg: u32) -> Poly {
        let mut p = Poly::int(ctx, self.int(-2, 2));
        if nvars == 0 {
            return p;
        }
        for _ in 0..self.int(0, 2) {
            let d = self.int(1, deg.max(1) as i64) as u32;
            if d > deg {
                continue;
            }
            let mut m = Poly::int(ctx, self.int(-2, 2));
            for _ in 0..d {
                m = &m * &Poly::var(ctx, self.rng.gen_range(0..nvars));
            }
            p = &p + &m;
        }
        p
    }

    pub fn antisym(&mut self, ctx: &Ctx, n: usize, nvars: usize, deg: u32) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(n, n, ctx);
        for i in 0..n {
            for j in i + 1..n {
                let p = self.poly(ctx, nvars, deg);
                m.set(j, i, -&p);
                m.set(i, j, p);
            }
        }
        m
    }

    /// Unit triangular, so the inverse is polynomial.
    pub fn unipotent(&mut self, ctx: &Ctx, n: usize, nvars: usize, deg: u32) -> PolyMatrix {
        let lower = self.coin();
        let mut m = PolyMatrix::identity(n, ctx);
        for i in 0..n {
            for j in i + 1..n {
                let p = self.poly(ctx, nvars, deg);
                if lower {
                    m.set(j, i, p);
                } else {
                    m.set(i, j, p);
                }
            }
        }
        m
    }

    /// Invertible integer matrix with small entries.
    pub fn invertible(&mut self, ctx: &Ctx, n: usize) -> PolyMatrix {
        loop {
            let m = PolyMatrix::from_fn(n, n, ctx, |i, j| Poly::int(ctx, if i == j { self.int(1, 2) } else { self.int(-1, 1) }));
            if !m.det().is_zero() {
                return m;
            }
        }
    }

    /// A structure of rank `2k` whose entries have degree at most `deg`.
    pub fn gcs(&mut self, k: usize, deg: u32) -> GCStructure {
        loop {
            let g = self.gcs_chain(k, deg);
            if g.blocks().iter().all(|m| m.max_degree() <= deg) {
                return g;
            }
        }
    }

    /// A structure of rank `2k` from a complex or symplectic seed and a chain of transforms.
    pub fn gcs_chain(&mut self, k: usize, deg: u32) -> GCStructure {
        let m = 2 * k;
        let ctx = Context::standard(m, 0, false);
        let a = self.invertible(&ctx, m);
        let ai = a.to_ratfunc().inverse().unwrap().to_poly().unwrap();
        let j0 = standard_j(&ctx, k);
        let mut g = if self.coin() {
            GCStructure::from_complex(&a.mul(&j0).mul(&ai)).unwrap()
        } else {
            GCStructure::from_symplectic(&ai.transpose().mul(&j0).mul(&ai)).unwrap()
        };
        for _ in 0..self.int(1, 3) {
            g = match self.int(0, 2) {
                0 => g.b_transform(&self.antisym(&ctx, m, m, deg)).unwrap(),
                1 => g.beta_transform(&self.antisym(&ctx, m, m, deg)).unwrap(),
                _ => g.tau_dual(),
            };
        }
        g
    }

    /// Random adapted blocks: a complex or symplectic seed moved by a frame
    /// change and constant or polynomial fields.
    pub fn adapted(&mut self, n: usize, deg: u32) -> AdaptedBlocks {
        let base = Context::standard(n, 0, false);
        let seed = if self.coin() { complex(n) } else { symplectic(n) };
        let a = self.unipotent(&base, n, n, 0);
        let c = self.unipotent(&base, n, n, 0);
        let mut b = seed.change_frame(&a, &c).unwrap();
        let z = PolyMatrix::zeros(n, n, &base);
        for _ in 0..self.int(1, 2) {
            let f1 = self.antisym(&base, n, n, deg);
            let f2 = self.antisym(&base, n, n, deg);
            b = match self.int(0, 3) {
                0 => b.b_transform(&f1, &z).unwrap(),
                1 => b.b_transform(&z, &f2).unwrap(),
                2 => b.beta_transform(&f1, &z).unwrap(),
                _ => b.beta_transform(&z, &f2).unwrap(),
            };
        }
        b
    }

    /// Adapted blocks with every entry of degree at most `deg`.
    pub fn adapted_bounded(&mut self, n: usize, deg: u32) -> AdaptedBlocks {
        loop {
            let b = self.adapted(n, deg);
            if b.blocks().iter().all(|m| m.max_degree() <= deg) {
                return b;
            }
        }
    }

    /// A semi-flat generalized Kahler pair: the standard pair moved by the same
    /// frame change and fields.
    pub fn semiflat_pair(&mut self, n: usize) -> SemiflatPair {
        let base = Context::standard(n, 0, false);
        let a = self.unipotent(&base, n, n, 0);
        let c = self.unipotent(&base, n, n, 0);
        let b31 = self.antisym(&base, n, 1, 1);
        let b34 = self.antisym(&base, n, 1, 1);
        let be21 = self.antisym(&base, n, 0, 0);
        let be24 = self.antisym(&base, n, 0, 0);
        let go = |x: AdaptedBlocks| {
            x.change_frame(&a, &c).unwrap().beta_transform(&be21, &be24).unwrap().b_transform(&b31, &b34).unwrap()
        };
        SemiflatPair::new(go(complex(n)), go(symplectic(n))).unwrap()
    }

    /// A generalized Kahler pair on `R^4` from a complex structure and a
    /// compatible symplectic form moved by a common frame change, with an
    /// optional B-field. Returns the pair and, when there is no B-field, the
    /// symplectic form.
    pub fn kahler4(&mut self) -> (GKPair, Option<PolyMatrix>) {
        let ctx = Context::standard(4, 0, false);
        let a = if self.coin() {
            let d = self.invertible(&ctx, 2);
            let e = self.invertible(&ctx, 2);
            let z = PolyMatrix::zeros(2, 2, &ctx);
            PolyMatrix::from_blocks(&[vec![&d, &z], vec![&z, &e]])
        } else {
            self.invertible(&ctx, 4)
        };
        let ai = a.to_ratfunc().inverse().unwrap().to_poly().unwrap();
        let j0 = standard_j(&ctx, 2);
        let j = a.mul(&j0).mul(&ai);
        let w = ai.transpose().mul(&j0).mul(&ai);
        let (cx, sy) = (GCStructure::from_complex(&j).unwrap(), GCStructure::from_symplectic(&w).unwrap());
        if self.coin() {
            (GKPair::new(cx, sy).unwrap(), Some(w))
        } else {
            let b = self.antisym(&ctx, 4, 1, 1);
            (GKPair::new(cx.b_transform(&b).unwrap(), sy.b_transform(&b).unwrap()).unwrap(), None)
        }
    }
}

/// `J d/dx_i = d/dy_i` on `(x_1..x_k, y_1..y_k)`.
pub fn standard_j(ctx: &Ctx, k: usize) -> PolyMatrix {
    PolyMatrix::from_fn(2 * k, 2 * k, ctx, |r, c| {
        if r == c + k {
            Poly::int(ctx, 1)
        } else if c == r + k {
            Poly::int(ctx, -1)
        } else {
            Poly::zero(ctx)
        }
    })
}

pub fn complex(n: usize) -> AdaptedBlocks {
    let c = Context::standard(n, 0, false);
    let one = PolyMatrix::identity(n, &c);
    let z = PolyMatrix::zeros(n, n, &c);
    AdaptedBlocks::standard(&one, &one.neg(), &z, &z).unwrap()
}

pub fn symplectic(n: usize) -> AdaptedBlocks {
    let c = Context::standard(n, 0, false);
    let one = PolyMatrix::identity(n, &c);
    let z = PolyMatrix::zeros(n, n, &c);
    AdaptedBlocks::standard(&z, &z, &one, &one).unwrap()
}

pub fn parse(n: usize, rows: &[&[&str]]) -> PolyMatrix {
    let c = Context::standard(n, 0, false);
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    PolyMatrix::parse_rows(&c, &rows).unwrap()
}

/// `c dx1 ^ dx2` as an `n x n` matrix.
pub fn two_form_12(n: usize, c: &str) -> PolyMatrix {
    let neg = format!("-({c})");
    let rows: Vec<Vec<&str>> = (0..n)
        .map(|i| (0..n).map(|j| match (i, j) { (0, 1) => c, (1, 0) => neg.as_str(), _ => "0" }).collect())
        .collect();
    let refs: Vec<&[&str]> = rows.iter().map(|r| r.as_slice()).collect();
    parse(n, &refs)
}

/// Twisted complex structure with `J31 = B'`.
pub fn b_complex(bp: &PolyMatrix) -> AdaptedBlocks {
    let n = bp.rows();
    let c = Context::standard(n, 0, false);
    let one = PolyMatrix::identity(n, &c);
    AdaptedBlocks::standard(&one, &one.neg(), &PolyMatrix::zeros(n, n, &c), bp).unwrap()
}

/// Twisted symplectic structure `(-B34, B31, 1, 1 - B31 B34)`.
pub fn b_symplectic(b31: &PolyMatrix, b34: &PolyMatrix) -> AdaptedBlocks {
    let n = b31.rows();
    let one = PolyMatrix::identity(n, b31.ctx());
    AdaptedBlocks::standard(&b34.neg(), b31, &one, &one.sub(&b31.mul(b34))).unwrap()
}

/// The named corpus: twisted complex and symplectic families and the canonical structures.
pub fn corpus() -> Vec<(String, AdaptedBlocks)> {
    let mut out = vec![
        ("B-complex B' = x1 dx1^dx2".to_string(), b_complex(&two_form_12(3, "x1"))),
        ("B-complex B' = x3 dx1^dx2".to_string(), b_complex(&two_form_12(3, "x3"))),
        ("B-symplectic B31 = 3, B34 = x1".to_string(), b_symplectic(&two_form_12(2, "3"), &two_form_12(2, "x1"))),
        ("B-symplectic B31 = x1, B34 = 0".to_string(), b_symplectic(&two_form_12(2, "x1"), &two_form_12(2, "0"))),
        ("B-symplectic B31 = x1, B34 = 1".to_string(), b_symplectic(&two_form_12(2, "x1"), &two_form_12(2, "1"))),
    ];
    for n in 1..=3 {
        out.push((format!("complex n = {n}"), complex(n)));
        out.push((format!("symplectic n = {n}"), symplectic(n)));
    }
    out
}
