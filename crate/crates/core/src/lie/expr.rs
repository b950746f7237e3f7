//! Bracket expressions: unevaluated trees over some leaf type (generator
//! handles, or plain names before they are resolved).

use std::fmt::Display;

use super::{Gen, LieElement};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr<L, F> {
    Leaf(L),
    Bracket(Box<Expr<L, F>>, Box<Expr<L, F>>),
    Sum(Vec<Term<L, F>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<L, F> {
    pub coeff: F,
    pub expr: Expr<L, F>,
}

impl<L, F: Field> Expr<L, F> {
    pub fn zero() -> Self {
        Expr::Sum(Vec::new())
    }

    pub fn bracket(a: Self, b: Self) -> Self {
        Expr::Bracket(Box::new(a), Box::new(b))
    }

    /// Right-nested bracket `[l1,[l2,[…,lk]]]`.
    pub fn right_nested(leaves: impl IntoIterator<Item = L>) -> Self
    where
        L: Clone,
    {
        let leaves: Vec<L> = leaves.into_iter().collect();
        let mut it = leaves.into_iter().rev();
        let mut acc = Expr::Leaf(it.next().expect("right_nested needs a leaf"));
        for l in it {
            acc = Expr::bracket(Expr::Leaf(l), acc);
        }
        acc
    }

    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            Expr::Leaf(l) => out.push(l),
            Expr::Bracket(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
            Expr::Sum(ts) => ts.iter().for_each(|t| t.expr.collect_leaves(out)),
        }
    }

    pub fn try_map_leaves<M, E>(&self, f: &mut impl FnMut(&L) -> Result<M, E>) -> Result<Expr<M, F>, E> {
        Ok(match self {
            Expr::Leaf(l) => Expr::Leaf(f(l)?),
            Expr::Bracket(a, b) => Expr::bracket(a.try_map_leaves(f)?, b.try_map_leaves(f)?),
            Expr::Sum(ts) => Expr::Sum(
                ts.iter()
                    .map(|t| Ok(Term { coeff: t.coeff.clone(), expr: t.expr.try_map_leaves(f)? }))
                    .collect::<Result<_, E>>()?,
            ),
        })
    }

    /// Folds the tree into any bilinear structure.
    pub fn evaluate<T, E>(
        &self,
        leaf: &mut impl FnMut(&L) -> Result<T, E>,
        bracket: &impl Fn(&T, &T) -> T,
        zero: &impl Fn() -> T,
        axpy: &impl Fn(&mut T, &F, &T),
    ) -> Result<T, E> {
        match self {
            Expr::Leaf(l) => leaf(l),
            Expr::Bracket(a, b) => {
                let x = a.evaluate(leaf, bracket, zero, axpy)?;
                let y = b.evaluate(leaf, bracket, zero, axpy)?;
                Ok(bracket(&x, &y))
            }
            Expr::Sum(ts) => {
                let mut acc = zero();
                for t in ts {
                    let v = t.expr.evaluate(leaf, bracket, zero, axpy)?;
                    axpy(&mut acc, &t.coeff, &v);
                }
                Ok(acc)
            }
        }
    }

    pub fn render(&self, name: &impl Fn(&L) -> String) -> String {
        match self {
            Expr::Leaf(l) => name(l),
            Expr::Bracket(a, b) => format!("[{},{}]", a.render(name), b.render(name)),
            Expr::Sum(ts) => render_terms(ts.iter().map(|t| (t.coeff.clone(), t.expr.render(name)))),
        }
    }
}

impl<F: Field> Expr<Gen, F> {
    pub fn to_lie(&self) -> LieElement<F> {
        self.evaluate::<_, std::convert::Infallible>(
            &mut |g| Ok(LieElement::generator(*g)),
            &|x, y| x.bracket(y),
            &LieElement::zero,
            &|acc, c, v| acc.add_scaled(c, v),
        )
        .unwrap_or_else(|e| match e {})
    }
}

/// Writes `c1 body1 + c2 body2 …` with signs folded into the operators and
/// unit coefficients suppressed; `0` for the empty sum.
pub fn render_terms<F: Field>(terms: impl IntoIterator<Item = (F, String)>) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = if neg { -c } else { c };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&coeff_prefix(&abs));
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn coeff_prefix<F: Field + Display>(c: &F) -> String {
    match c.as_small_integer() {
        Some(n) => n.to_string(),
        None => format!("({c})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn renders_signs_and_fractions() {
        let terms = vec![
            (Q::from_ratio(1, 2), "[a,a]".to_string()),
            (Q::from_i64(-1), "b".to_string()),
            (Q::from_i64(2), "c".to_string()),
        ];
        assert_eq!(render_terms(terms), "(1/2)[a,a] - b + 2c");
        assert_eq!(render_terms(Vec::<(Q, String)>::new()), "0");
        assert_eq!(render_terms(vec![(Q::from_i64(-3), "x".to_string())]), "-3x");
    }

    #[test]
    fn right_nested_shape() {
        let e: Expr<&str, Q> = Expr::right_nested(["b", "a", "a"]);
        assert_eq!(e.render(&|s: &&str| s.to_string()), "[b,[a,a]]");
    }
}
