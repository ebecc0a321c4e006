use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::FunctionalError;
use crate::quantity::Rational;
use crate::subpartition::Subpartition;
use crate::tree::WeightedTree;

/// Federer–Fleming type functional over `k` nonnegative, ω-orthogonal vertex
/// functions:
///
/// `max_i (Σ_{xy∈E} φ(xy)|f_i(x) − f_i(y)| + α Σ_x p(x)|f_i(x)|) / Σ_x ω(x)|f_i(x)|`.
///
/// On indicator functions of a subpartition this is exactly its cost.
pub fn ff_functional(tree: &WeightedTree, functions: &[Vec<Rational>], alpha: &Rational) -> Result<Rational, FunctionalError> {
    if alpha.is_negative() {
        return Err(FunctionalError::NegativeAlpha);
    }
    let n = tree.len();
    for (i, f) in functions.iter().enumerate() {
        if f.len() != n {
            return Err(FunctionalError::LengthMismatch { expected: n, found: f.len() });
        }
        if f.iter().any(Signed::is_negative) {
            return Err(FunctionalError::Negative(i));
        }
        if f.iter().all(Zero::is_zero) {
            return Err(FunctionalError::Zero(i));
        }
    }
    let omega: Vec<BigInt> = tree.omega().iter().map(|w| BigInt::from(w.raw())).collect();
    for i in 0..functions.len() {
        for j in i + 1..functions.len() {
            let inner: Rational = functions[i]
                .iter()
                .zip(&functions[j])
                .zip(&omega)
                .map(|((a, b), w)| a * b * w)
                .sum();
            if !inner.is_zero() {
                return Err(FunctionalError::NotOrthogonal(i, j));
            }
        }
    }
    let edges = tree.edge_list();
    let mut best = Rational::zero();
    for f in functions {
        let mut numer = Rational::zero();
        for &(x, y, flow) in &edges {
            numer += (&f[x] - &f[y]).abs() * BigInt::from(flow.raw());
        }
        let mut pot = Rational::zero();
        let mut denom = Rational::zero();
        for (x, fx) in f.iter().enumerate() {
            pot += fx * BigInt::from(tree.potentials()[x].raw());
            denom += fx * &omega[x];
        }
        let value = (numer + alpha * pot) / denom;
        if value > best {
            best = value;
        }
    }
    Ok(best)
}

/// Indicator functions `1_{A_i}` of each part.
pub fn indicator_functions(sub: &Subpartition) -> Vec<Vec<Rational>> {
    sub.parts()
        .iter()
        .map(|part| {
            let mut f = vec![Rational::zero(); sub.n()];
            for &v in part {
                f[v] = Rational::one();
            }
            f
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subpartition::subpartition_cost;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn path3() -> WeightedTree {
        WeightedTree::from_integers(&[1; 3], &[0; 3], &[(0, 1, 1), (1, 2, 1)], 2).unwrap()
    }

    #[test]
    fn indicators_reproduce_cost() {
        let t = path3();
        let s = Subpartition::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        let v = ff_functional(&t, &indicator_functions(&s), &r(1, 1)).unwrap();
        assert_eq!(v, r(1, 1));
        assert_eq!(v, subpartition_cost(&t, &s, &r(1, 1)).unwrap());
    }

    #[test]
    fn homogeneous_in_each_function() {
        let t = path3();
        let s = Subpartition::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        let mut fs = indicator_functions(&s);
        let before = ff_functional(&t, &fs, &r(1, 1)).unwrap();
        for x in fs[1].iter_mut() {
            *x *= r(7, 3);
        }
        assert_eq!(ff_functional(&t, &fs, &r(1, 1)).unwrap(), before);
    }

    #[test]
    fn rejects_bad_families() {
        let t = path3();
        let one = vec![r(1, 1); 3];
        assert_eq!(ff_functional(&t, &[one.clone(), one.clone()], &r(1, 1)), Err(FunctionalError::NotOrthogonal(0, 1)));
        assert_eq!(ff_functional(&t, &[vec![r(0, 1); 3]], &r(1, 1)), Err(FunctionalError::Zero(0)));
        assert_eq!(ff_functional(&t, &[vec![r(-1, 1), r(0, 1), r(0, 1)]], &r(1, 1)), Err(FunctionalError::Negative(0)));
        assert!(matches!(ff_functional(&t, &[vec![r(1, 1)]], &r(1, 1)), Err(FunctionalError::LengthMismatch { .. })));
    }

    #[test]
    fn non_indicator_value() {
        // f = (2, 1, 0): |2-1| + |1-0| = 2 over 2+1 = 3
        let t = path3();
        let v = ff_functional(&t, &[vec![r(2, 1), r(1, 1), r(0, 1)]], &r(1, 1)).unwrap();
        assert_eq!(v, r(2, 3));
    }
}
