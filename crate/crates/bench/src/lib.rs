//! Fixed inputs shared by the benchmarks.

use gcmirror::{AdaptedBlocks, Context, PolyMatrix};

fn parse(n: usize, rows: &[Vec<String>]) -> PolyMatrix {
    let ctx = Context::standard(n, 0, false);
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
    PolyMatrix::parse_rows(&ctx, &rows).expect("fixed input parses")
}

/// The complex structure twisted by `B' = x_coord dx1 ^ dx2`; closed iff `coord <= 2`. Needs `n >= 2`.
pub fn b_complex(n: usize, coord: usize) -> AdaptedBlocks {
    let ctx = Context::standard(n, 0, false);
    let one = PolyMatrix::identity(n, &ctx);
    let zero = PolyMatrix::zeros(n, n, &ctx);
    let rows: Vec<Vec<String>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i, j) {
                    (0, 1) => format!("x{coord}"),
                    (1, 0) => format!("-x{coord}"),
                    _ => "0".into(),
                })
                .collect()
        })
        .collect();
    AdaptedBlocks::standard(&one, &one.neg(), &zero, &parse(n, &rows)).expect("adapted")
}

/// Constant blocks: the symplectic structure under a constant beta-field.
pub fn constant_symplectic(n: usize) -> AdaptedBlocks {
    let ctx = Context::standard(n, 0, false);
    let one = PolyMatrix::identity(n, &ctx);
    let zero = PolyMatrix::zeros(n, n, &ctx);
    let beta = PolyMatrix::from_fn(n, n, &ctx, |i, j| gcmirror::Poly::int(&ctx, j as i64 - i as i64));
    AdaptedBlocks::standard(&zero, &zero, &one, &one).and_then(|b| b.beta_transform(&beta, &zero)).expect("adapted")
}
