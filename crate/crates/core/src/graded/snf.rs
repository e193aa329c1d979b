use super::matrix::IntegerMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `u * a * v == d` with `d` diagonal, non-negative, `d[i] | d[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl Smith {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Columns of `v` spanning the kernel of `a`, as a saturated lattice basis.
    pub fn kernel_basis(&self) -> IntegerMatrix {
        self.v.columns_from(self.rank())
    }
}

fn min_nonzero(d: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form with unimodular transforms. The postcondition is
/// re-verified before returning; a failure there is a bug, not bad input.
pub fn smith_normal_form(a: &IntegerMatrix) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut v = IntegerMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_nonzero(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let p = d.get(t, t).clone();
            for i in t + 1..m {
                if !d.get(i, t).is_zero() {
                    let q = -(d.get(i, t) / &p);
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
            }
            for j in t + 1..n {
                if !d.get(t, j).is_zero() {
                    let q = -(d.get(t, j) / &p);
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                }
            }

            // Leftover remainders are smaller than the pivot: promote the smallest.
            let mut smaller: Option<(usize, bool)> = None;
            let mut smallest = p.abs();
            for i in t + 1..m {
                let x = d.get(i, t).abs();
                if !x.is_zero() && x < smallest {
                    smallest = x;
                    smaller = Some((i, true));
                }
            }
            for j in t + 1..n {
                let x = d.get(t, j).abs();
                if !x.is_zero() && x < smallest {
                    smallest = x;
                    smaller = Some((j, false));
                }
            }
            match smaller {
                Some((i, true)) => {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    continue;
                }
                Some((j, false)) => {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    continue;
                }
                None => {}
            }

            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    d.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }

        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    let s = Smith { d, u, v };
    verify(a, &s);
    s
}

fn verify(a: &IntegerMatrix, s: &Smith) {
    let prod = &(&s.u * a) * &s.v;
    assert_eq!(prod, s.d, "smith normal form: U*A*V != D");
    for w in [&s.u, &s.v] {
        let det = w.determinant().expect("square transform");
        assert!(det.abs().is_one(), "smith normal form: transform not unimodular");
    }
    assert!(s.d.is_diagonal(), "smith normal form: D not diagonal");
    let diag: Vec<&BigInt> = (0..s.d.rows().min(s.d.cols())).map(|i| s.d.get(i, i)).collect();
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(w[0]) };
        assert!(ok, "smith normal form: divisibility chain broken");
    }
    assert!(diag.iter().all(|x| !x.is_negative()), "smith normal form: negative factor");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_is_fixed() {
        let i = IntegerMatrix::identity(3);
        let s = smith_normal_form(&i);
        assert_eq!(s.d, i);
        assert_eq!(s.u, i);
        assert_eq!(s.v, i);
    }

    #[test]
    fn two_by_two_example() {
        // Row/column reduction by hand: [[2,4],[6,8]] -> [[2,0],[0,-4]] -> diag(2,4).
        let a = IntegerMatrix::from_i64(2, 2, &[2, 4, 6, 8]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, IntegerMatrix::from_i64(2, 2, &[2, 0, 0, 4]));
        assert_eq!(s.invariant_factors(), ints(&[2, 4]));
    }

    #[test]
    fn zero_matrix() {
        let z = IntegerMatrix::zeros(2, 2);
        let s = smith_normal_form(&z);
        assert_eq!(s.d, z);
        assert_eq!(s.u, IntegerMatrix::identity(2));
        assert_eq!(s.v, IntegerMatrix::identity(2));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn divisibility_needs_row_mixing() {
        // diag(2,3) is not in normal form; the answer is diag(1,6).
        let a = IntegerMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        assert_eq!(smith_normal_form(&a).invariant_factors(), ints(&[1, 6]));
    }

    #[test]
    fn rectangular_and_kernel() {
        let a = IntegerMatrix::from_i64(1, 3, &[2, 4, 6]);
        let s = smith_normal_form(&a);
        assert_eq!(s.invariant_factors(), ints(&[2]));
        let k = s.kernel_basis();
        assert_eq!(k.cols(), 2);
        assert!((&a * &k).is_zero());
    }
}
