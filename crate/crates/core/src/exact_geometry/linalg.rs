//! Dense exact linear algebra over the rationals.
//!
//! Matrices are row-major `Vec<Vec<Rational>>`. Everything here is small
//! (a few dozen rows and columns at most), so plain Gauss-Jordan elimination
//! and a tableau simplex are sufficient.

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Reduced row echelon form. Returns the reduced matrix and the pivot column
/// of each nonzero row.
pub fn rref(mut m: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    rref(m.to_vec()).1.len()
}

/// A basis of the right null space `{v : m v = 0}`.
pub fn kernel_basis(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m.to_vec());
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

/// One nonzero vector of the right null space, if the columns are dependent.
pub fn kernel_vector(m: &[Vec<Rational>], cols: usize) -> Option<Vec<Rational>> {
    let (r, pivots) = rref(m.to_vec());
    let f = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); cols];
    v[f] = Rational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -r[row][f].clone();
    }
    Some(v)
}

/// Unique solution of the square or overdetermined system `m x = b`, if one exists.
pub fn solve_unique(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    let aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(aug);
    if pivots.contains(&cols) || pivots.len() != cols {
        return None;
    }
    Some((0..cols).map(|i| r[i][cols].clone()).collect())
}

pub fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(Rational::zero(), |acc, (p, q)| acc + p * q))
        .collect()
}

fn check_shape(a: &[Vec<Rational>], b: &[Rational]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!(
            "{} constraint rows but right-hand side of length {}",
            a.len(),
            b.len()
        )));
    }
    let cols = a.first().map_or(0, Vec::len);
    if let Some(bad) = a.iter().position(|r| r.len() != cols) {
        return Err(Error::Shape(format!(
            "row {bad} has {} entries, expected {cols}",
            a[bad].len()
        )));
    }
    Ok(cols)
}

/// Finds `λ ≥ 0` with `A λ = b` whose support columns are linearly
/// independent, or `None` when the system is infeasible.
///
/// Phase-1 simplex on `A λ + s = b` (rows sign-normalized so `b ≥ 0`),
/// minimizing the sum of artificials `s`. Entering and leaving variables are
/// chosen by lowest index (Bland's rule), so degenerate pivots cannot cycle.
pub fn solve_linear_feasibility(a: &[Vec<Rational>], b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let cols = check_shape(a, b)?;
    let rows = a.len();
    let width = cols + rows;

    // tableau[r] = [A_r | e_r | b_r]
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for (r, (row, br)) in a.iter().zip(b).enumerate() {
        let neg = br.is_negative();
        let mut t: Vec<Rational> = row.iter().map(|v| if neg { -v.clone() } else { v.clone() }).collect();
        t.extend((0..rows).map(|k| if k == r { Rational::one() } else { Rational::zero() }));
        t.push(if neg { -br.clone() } else { br.clone() });
        tab.push(t);
    }
    let mut basis: Vec<usize> = (cols..width).collect();

    // Negated reduced costs of the phase-1 objective; entry `width` holds its value.
    let mut obj = vec![Rational::zero(); width + 1];
    for t in &tab {
        for j in 0..cols {
            obj[j] += &t[j];
        }
        obj[width] += &t[width];
    }

    while let Some(enter) = (0..cols).find(|&j| obj[j].is_positive()) {
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..rows {
            if tab[r][enter].is_positive() {
                let ratio = &tab[r][width] / &tab[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // The phase-1 objective is bounded below by zero, so some row must block.
        let (lr, _) = leave.expect("phase-1 simplex is bounded");
        pivot(&mut tab, &mut obj, lr, enter);
        basis[lr] = enter;
    }

    if !obj[width].is_zero() {
        return Ok(None);
    }

    // Drive zero-level artificials out of the basis where possible.
    for r in 0..rows {
        if basis[r] >= cols {
            if let Some(j) = (0..cols).find(|&j| !tab[r][j].is_zero() && !basis.contains(&j)) {
                pivot(&mut tab, &mut obj, r, j);
                basis[r] = j;
            }
        }
    }

    let mut lambda = vec![Rational::zero(); cols];
    for (r, &bv) in basis.iter().enumerate() {
        if bv < cols {
            lambda[bv] = tab[r][width].clone();
        }
    }
    assert!(lambda.iter().all(|v| !v.is_negative()), "simplex produced a negative weight");
    assert_eq!(mat_vec(a, &lambda), b, "simplex solution does not satisfy A λ = b");
    Ok(Some(lambda))
}

fn pivot(tab: &mut [Vec<Rational>], obj: &mut [Rational], pr: usize, pc: usize) {
    let inv = tab[pr][pc].recip();
    for v in tab[pr].iter_mut() {
        *v *= &inv;
    }
    let prow = tab[pr].clone();
    for (r, row) in tab.iter_mut().enumerate() {
        if r != pr && !row[pc].is_zero() {
            let f = row[pc].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
    }
    if !obj[pc].is_zero() {
        let f = obj[pc].clone();
        for (v, p) in obj.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
}

/// Moves a feasible `λ ≥ 0` (with `A λ = b`) to one whose support columns
/// are linearly independent, never enlarging the support.
///
/// Each round takes a null-space direction `d` of the support columns and
/// steps `λ - t d` until the first weight (lowest index on ties) reaches zero.
pub fn reduce_to_basic(a: &[Vec<Rational>], lambda: &[Rational]) -> Vec<Rational> {
    let mut lambda = lambda.to_vec();
    loop {
        let support: Vec<usize> = (0..lambda.len()).filter(|&j| lambda[j].is_positive()).collect();
        let sub: Vec<Vec<Rational>> = a
            .iter()
            .map(|row| support.iter().map(|&j| row[j].clone()).collect())
            .collect();
        let Some(mut d) = kernel_vector(&sub, support.len()) else {
            return lambda;
        };
        if !d.iter().any(Signed::is_positive) {
            d.iter_mut().for_each(|v| *v = -v.clone());
        }
        let mut step: Option<(usize, Rational)> = None;
        for (k, dk) in d.iter().enumerate() {
            if dk.is_positive() {
                let t = &lambda[support[k]] / dk;
                if step.as_ref().is_none_or(|(_, best)| t < *best) {
                    step = Some((k, t));
                }
            }
        }
        let (hit, t) = step.expect("direction has a positive entry");
        for (k, dk) in d.iter().enumerate() {
            lambda[support[k]] -= &t * dk;
        }
        lambda[support[hit]] = Rational::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::rat;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn segment_vertex() {
        let lam = solve_linear_feasibility(&m(&[&[1, 1]]), &v(&[1])).unwrap().unwrap();
        assert!(lam == v(&[1, 0]) || lam == v(&[0, 1]));
    }

    #[test]
    fn identity_system() {
        let lam = solve_linear_feasibility(&m(&[&[1, 0], &[0, 1]]), &v(&[1, 2])).unwrap().unwrap();
        assert_eq!(lam, v(&[1, 2]));
    }

    #[test]
    fn sign_contradiction_is_infeasible() {
        assert!(solve_linear_feasibility(&m(&[&[1], &[-1]]), &v(&[1, 1])).unwrap().is_none());
    }

    #[test]
    fn shape_mismatch_is_usage_error() {
        assert!(solve_linear_feasibility(&m(&[&[1, 1]]), &v(&[1, 2])).is_err());
        assert!(solve_linear_feasibility(&m(&[&[1, 1], &[1]]), &v(&[1, 2])).is_err());
    }

    #[test]
    fn redundant_rows_and_negative_rhs() {
        // Second row duplicates the first; third is negated.
        let a = m(&[&[1, 2, 3], &[1, 2, 3], &[-1, -1, 0]]);
        let b = v(&[6, 6, -2]);
        let lam = solve_linear_feasibility(&a, &b).unwrap().unwrap();
        assert_eq!(mat_vec(&a, &lam), b);
        let support: Vec<usize> = (0..3).filter(|&j| lam[j].is_positive()).collect();
        let sub: Vec<Vec<Rational>> = a.iter().map(|r| support.iter().map(|&j| r[j].clone()).collect()).collect();
        assert_eq!(rank(&sub), support.len());
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let a = m(&[&[1, 1, 1], &[0, 1, 2]]);
        let k = kernel_basis(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&a, &k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn reduce_keeps_target() {
        let a = m(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
        let lam: Vec<Rational> = vec![rat(1) / rat(4); 4];
        let b = mat_vec(&a, &lam);
        let r = reduce_to_basic(&a, &lam);
        assert_eq!(mat_vec(&a, &r), b);
        assert!(r.iter().filter(|x| x.is_positive()).count() <= 2);
        assert!(r.iter().all(|x| !x.is_negative()));
    }
}
