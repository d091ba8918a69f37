use num_traits::{One, Zero};

use super::rational::Q;

/// Outcome of an exact linear solve `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum LinSolution {
    Unique(Vec<Q>),
    /// Every solution is `particular + sum_i t_i * nullspace[i]`.
    Underdetermined {
        particular: Vec<Q>,
        nullspace: Vec<Vec<Q>>,
    },
    NoSolution,
}

impl LinSolution {
    pub fn particular(&self) -> Option<&[Q]> {
        match self {
            LinSolution::Unique(x) => Some(x),
            LinSolution::Underdetermined { particular, .. } => Some(particular),
            LinSolution::NoSolution => None,
        }
    }
}

fn mat_vec(a: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(Q::zero(), |acc, (r, v)| acc + r * v))
        .collect()
}

/// Solves `A x = b` over `Q` by Gauss-Jordan elimination. `ncols` is the
/// number of unknowns, so systems with no rows are accepted.
///
/// The returned particular solution and every null vector are checked by
/// multiplying back exactly.
pub fn linsolve(a: &[Vec<Q>], b: &[Q], ncols: usize) -> LinSolution {
    assert_eq!(a.len(), b.len(), "row count of A and length of b differ");
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), ncols, "ragged matrix");
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let rows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    if m[rank..].iter().any(|row| !row[ncols].is_zero()) {
        return LinSolution::NoSolution;
    }
    let mut particular = vec![Q::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][ncols].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let nullspace: Vec<Vec<Q>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][f].clone();
            }
            v
        })
        .collect();
    assert_eq!(mat_vec(a, &particular), b, "linsolve back-substitution failed");
    for v in &nullspace {
        assert!(
            mat_vec(a, v).iter().all(|x| x.is_zero()),
            "linsolve null vector check failed"
        );
    }
    if nullspace.is_empty() {
        LinSolution::Unique(particular)
    } else {
        LinSolution::Underdetermined {
            particular,
            nullspace,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&v| qi(v)).collect()).collect()
    }

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn identity_system() {
        let a = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(linsolve(&a, &v(&[4, -2, 7]), 3), LinSolution::Unique(v(&[4, -2, 7])));
    }

    #[test]
    fn inconsistent() {
        let a = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(linsolve(&a, &v(&[1, 2]), 2), LinSolution::NoSolution);
    }

    #[test]
    fn small_integer_system() {
        let a = m(&[&[2, -1, 3], &[1, 4, -2], &[-3, 2, 5]]);
        let x = v(&[1, -2, 3]);
        let b = mat_vec(&a, &x);
        assert_eq!(linsolve(&a, &b, 3), LinSolution::Unique(x));
    }

    #[test]
    fn underdetermined() {
        let a = m(&[&[1, 2, 3]]);
        match linsolve(&a, &v(&[6]), 3) {
            LinSolution::Underdetermined {
                particular,
                nullspace,
            } => {
                assert_eq!(particular, v(&[6, 0, 0]));
                assert_eq!(nullspace.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn no_rows() {
        match linsolve(&[], &[], 2) {
            LinSolution::Underdetermined { nullspace, .. } => assert_eq!(nullspace.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
