//! Exact coefficient arithmetic.

mod gauss;
pub(crate) mod parse;
mod poly;
mod ratfunc;

pub use gauss::GaussRational;
pub use poly::{Context, Ctx, Monomial, Poly};
pub use ratfunc::RatFunc;

pub(crate) use poly::same_ctx;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("polynomials belong to different coordinate contexts")]
    ContextMismatch,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("invalid or duplicate coordinate name '{0}'")]
    BadName(String),
    #[error("variable '{0}' is not assigned")]
    Unassigned(String),
    #[error("cannot evaluate {0} at this point")]
    NonEvaluable(String),
    #[error("fiber modes need a periodic context")]
    ModesNotAllowed,
    #[error("mode vector has length {got}, expected {expected}")]
    ModeLength { expected: usize, got: usize },
    #[error("column {column}: {message}")]
    Parse { column: usize, message: String },
}

impl ScalarError {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        ScalarError::Parse { column, message: message.into() }
    }
}

struct PolyBuilder<'a> {
    ctx: &'a Ctx,
}

impl parse::Builder for PolyBuilder<'_> {
    type Out = Poly;

    fn constant(&self, c: GaussRational) -> Poly {
        Poly::constant(self.ctx, c)
    }

    fn name(&self, name: &str) -> Option<Poly> {
        if name == "varpi" {
            return Some(Poly::varpi(self.ctx));
        }
        Poly::var_named(self.ctx, name).ok()
    }

    fn mode(&self, m: Vec<i64>) -> Result<Poly, String> {
        Poly::mode(self.ctx, m).map_err(|e| e.to_string())
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }

    fn neg(&self, a: &Poly) -> Poly {
        -a
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a * b
    }

    fn as_constant(&self, a: &Poly) -> Option<GaussRational> {
        a.as_constant()
    }

    fn call(&self, func: &str, _arg: &Poly) -> Result<Poly, String> {
        Err(format!("unknown function '{func}'"))
    }

    fn caret_product(&self) -> bool {
        false
    }
}

/// Parses a polynomial in the given context.
pub fn parse_poly(ctx: &Ctx, src: &str) -> Result<Poly, ScalarError> {
    parse::Parser::parse(src, &PolyBuilder { ctx })
}

impl Poly {
    pub fn parse(ctx: &Ctx, src: &str) -> Result<Poly, ScalarError> {
        parse_poly(ctx, src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn ctx2() -> Ctx {
        Context::standard(2, 2, true)
    }

    fn p(src: &str) -> Poly {
        parse_poly(&ctx2(), src).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let ctx = Context::new(vec!["x".into()], vec![], false).unwrap();
        let a = parse_poly(&ctx, "x + 1/2").unwrap();
        let b = parse_poly(&ctx, "x - 1/2").unwrap();
        assert_eq!(&a * &b, parse_poly(&ctx, "x^2 - 1/4").unwrap());
        assert_eq!((&a * &b).to_canonical(), "x^2 - 1/4");
    }

    #[test]
    fn cancellation_is_canonical_zero() {
        let s = &p("i*x1") + &p("-i*x1");
        assert!(s.is_zero());
        assert_eq!(s.n_terms(), 0);
        assert_eq!(s.to_canonical(), "0");
    }

    #[test]
    fn monomial_product() {
        // term-by-term oracle: x1 x2 * x2 has one term with exponents (1, 2)
        let r = &p("x1*x2") * &p("x2");
        let (m, c) = r.terms().next().unwrap();
        assert_eq!(r.n_terms(), 1);
        assert_eq!(m.exps, vec![1, 2, 0, 0]);
        assert!(c.is_one());
        assert_eq!(r.to_canonical(), "x1*x2^2");
    }

    #[test]
    fn derivatives() {
        let ctx = Context::new(vec!["x".into()], vec![], false).unwrap();
        let a = parse_poly(&ctx, "x^2 + x/2").unwrap();
        assert_eq!(a.partial_named("x").unwrap(), parse_poly(&ctx, "2*x + 1/2").unwrap());
        assert!(parse_poly(&ctx, "7/3").unwrap().partial(0).is_zero());
        assert!(matches!(a.partial_named("y"), Err(ScalarError::UnknownVariable(_))));
    }

    #[test]
    fn fiber_mode_derivative() {
        // chain rule on e^{2 pi i xi1} x1: the mode contributes 1 * varpi
        let d = p("E[1,0]*x1").partial_named("xi1").unwrap();
        assert_eq!(d, p("varpi*E[1,0]*x1"));
        assert_eq!(d.to_canonical(), "varpi*x1*E[1,0]");
        let d2 = p("E[-2,3]").partial_named("xi2").unwrap();
        assert_eq!(d2, p("3*varpi*E[-2,3]"));
    }

    #[test]
    fn evaluation() {
        let ctx = Context::new(vec!["x".into()], vec![], false).unwrap();
        let at = |v: i64| HashMap::from([("x".to_string(), GaussRational::from_int(v))]);
        assert_eq!(parse_poly(&ctx, "x^2 + 1").unwrap().evaluate(&at(2)).unwrap(), GaussRational::from_int(5));
        assert_eq!(
            parse_poly(&ctx, "i*x").unwrap().evaluate(&at(3)).unwrap(),
            GaussRational::from_parts((0, 1), (3, 1))
        );
        let pt = HashMap::from([
            ("x1".to_string(), GaussRational::from_int(1)),
            ("x2".to_string(), GaussRational::from_int(7)),
        ]);
        assert!(p("x1*x2 - x2").evaluate(&pt).unwrap().is_zero());
        assert!(matches!(p("x1").evaluate(&HashMap::new()), Err(ScalarError::Unassigned(_))));
    }

    #[test]
    fn mode_evaluation_rules() {
        let mut pt = HashMap::from([
            ("xi1".to_string(), GaussRational::from_frac(1, 2)),
            ("xi2".to_string(), GaussRational::from_int(0)),
        ]);
        assert_eq!(p("3*E[2,0]").evaluate(&pt).unwrap(), GaussRational::from_int(3));
        assert!(matches!(p("E[1,0]").evaluate(&pt), Err(ScalarError::NonEvaluable(_))));
        pt.insert("x1".into(), GaussRational::one());
        assert!(matches!(p("varpi").evaluate(&pt), Err(ScalarError::NonEvaluable(_))));
    }

    #[test]
    fn modes_rejected_without_periodic_fibers() {
        let ctx = Context::standard(1, 1, false);
        assert!(parse_poly(&ctx, "E[1]").is_err());
        assert!(parse_poly(&ctx, "E[0]").is_ok());
    }

    #[test]
    fn context_mismatch() {
        let a = parse_poly(&Context::standard(1, 0, false), "x1").unwrap();
        let b = parse_poly(&Context::standard(2, 0, false), "x1").unwrap();
        assert_eq!(a.try_add(&b), Err(ScalarError::ContextMismatch));
        assert_eq!(a.try_mul(&b), Err(ScalarError::ContextMismatch));
    }

    #[test]
    fn grammar_example_roundtrip() {
        let src = "(3/2)*x1^2*x2 - (1/2*i)*E[1,0]";
        let a = p(src);
        assert_eq!(a.to_canonical(), src);
        let c = p("(1/2+3*i)*x1 + (-1/2-1*i)");
        assert_eq!(c.to_canonical(), "(1/2+3*i)*x1 + (-1/2-1*i)");
        assert_eq!(p(&c.to_canonical()), c);
    }

    #[test]
    fn parse_errors_carry_columns() {
        match parse_poly(&ctx2(), "x1 + $") {
            Err(ScalarError::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
        match parse_poly(&ctx2(), "x1 + y") {
            Err(ScalarError::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_division() {
        let a = p("x1^2 - x2^2");
        let d = p("x1 + x2");
        assert_eq!(a.div_exact(&d), Some(p("x1 - x2")));
        assert_eq!(p("x1^2 + 1").div_exact(&d), None);
        assert_eq!(p("E[1,0]*x1 + E[2,0]").div_exact(&p("E[1,0]")), Some(p("x1 + E[1,0]")));
    }

    pub(crate) fn arb_poly(ctx: Ctx) -> impl Strategy<Value = Poly> {
        let c2 = ctx.clone();
        proptest::collection::vec(
            (
                proptest::collection::vec(0u32..3, 4),
                proptest::collection::vec(-1i64..2, 2),
                -4i64..5,
                -3i64..4,
                1i64..4,
            ),
            0..5,
        )
        .prop_map(move |ts| {
            let mut acc = Poly::zero(&c2);
            for (exps, modes, re, im, den) in ts {
                let m = Monomial { exps, modes, varpi: 0 };
                let c = GaussRational::from_parts((re, den), (im, den));
                acc = &acc + &Poly::from_term(&c2, m, c);
            }
            acc
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in arb_poly(ctx2()), b in arb_poly(ctx2()), c in arb_poly(ctx2())) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn leibniz_rule(a in arb_poly(ctx2()), b in arb_poly(ctx2()), v in 0usize..4) {
            let lhs = (&a * &b).partial(v);
            let rhs = &(&a.partial(v) * &b) + &(&a * &b.partial(v));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mixed_partials_commute(a in arb_poly(ctx2()), u in 0usize..4, v in 0usize..4) {
            prop_assert_eq!(a.partial(u).partial(v), a.partial(v).partial(u));
        }

        #[test]
        fn canonical_roundtrip(a in arb_poly(ctx2())) {
            let s = a.to_canonical();
            let back = parse_poly(&ctx2(), &s).unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_canonical(), s);
        }

        #[test]
        fn division_inverts_multiplication(a in arb_poly(ctx2()), b in arb_poly(ctx2())) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
