//! Exact integer linear algebra on small lattices.
//!
//! Vectors are `Vec<i64>`; a family of vectors is a slice of them (the
//! generators of a sublattice, the rays of a cone, the columns of a map).
//! Intermediate arithmetic runs in `i128` and rationals in `Ratio<i128>`,
//! which is ample for the ranks (at most four or five) used here.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Point = Vec<i64>;
type Q = Ratio<i128>;

/// Echelon basis of the sublattice spanned by a family of generators.
///
/// Basis vectors are ordered by strictly increasing pivot (first nonzero
/// coordinate), pivots are positive and entries at later pivots are reduced
/// into `[0, pivot)`. The form is canonical for the sublattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    dim: usize,
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

impl Hnf {
    pub fn new(dim: usize, generators: &[Point]) -> Self {
        let mut rows: Vec<Vec<i128>> = generators
            .iter()
            .map(|g| {
                assert_eq!(g.len(), dim, "generator of wrong length");
                g.iter().map(|&x| x as i128).collect()
            })
            .filter(|r: &Vec<i128>| r.iter().any(|x| !x.is_zero()))
            .collect();
        let mut basis = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..dim {
            // gcd-combine every remaining row that is nonzero at `col`
            let mut pivot_row: Option<Vec<i128>> = None;
            let mut rest = Vec::with_capacity(rows.len());
            for row in rows.drain(..) {
                if row[col].is_zero() {
                    rest.push(row);
                    continue;
                }
                match pivot_row.take() {
                    None => pivot_row = Some(row),
                    Some(p) => {
                        let (a, b) = (p[col], row[col]);
                        let ext = a.extended_gcd(&b);
                        let g = ext.gcd;
                        let new_p: Vec<i128> =
                            p.iter().zip(&row).map(|(x, y)| ext.x * x + ext.y * y).collect();
                        let (fa, fb) = (a / g, b / g);
                        let killed: Vec<i128> =
                            row.iter().zip(&p).map(|(y, x)| fa * y - fb * x).collect();
                        debug_assert!(killed[col].is_zero());
                        if killed.iter().any(|x| !x.is_zero()) {
                            rest.push(killed);
                        }
                        pivot_row = Some(new_p);
                    }
                }
            }
            rows = rest;
            if let Some(mut p) = pivot_row {
                if p[col] < 0 {
                    p.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push(p);
                pivots.push(col);
            }
        }
        // reduce above-pivot entries
        for i in (0..basis.len()).rev() {
            let (pc, pv) = (pivots[i], basis[i][pivots[i]]);
            for k in 0..i {
                let q = Integer::div_floor(&basis[k][pc], &pv);
                if !q.is_zero() {
                    let bi = basis[i].clone();
                    basis[k].iter_mut().zip(&bi).for_each(|(x, y)| *x -= q * y);
                }
            }
        }
        Hnf { dim, rows: basis, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Basis vectors of the sublattice, in echelon order.
    pub fn basis(&self) -> Vec<Point> {
        self.rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
    }

    /// Canonical representative of `v` modulo the sublattice.
    pub fn reduce(&self, v: &[i64]) -> Point {
        assert_eq!(v.len(), self.dim);
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let q = Integer::div_floor(&w[pc], &row[pc]);
            if !q.is_zero() {
                w.iter_mut().zip(row).for_each(|(x, y)| *x -= q * y);
            }
        }
        w.into_iter().map(|x| x as i64).collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|x| *x == 0)
    }

    /// True when the sublattice is all of `Z^dim`.
    pub fn is_full(&self) -> bool {
        self.rank() == self.dim && self.rows.iter().zip(&self.pivots).all(|(r, &p)| r[p] == 1)
    }
}

/// Exact determinant of a square matrix given by its columns.
pub fn det(columns: &[Point]) -> i128 {
    let n = columns.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|r| (0..n).map(|c| Q::from_integer(columns[c][r] as i128)).collect())
        .collect();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let pv = a[c][c];
        d *= pv;
        for r in c + 1..n {
            let f = a[r][c] / pv;
            if !f.is_zero() {
                for k in c..n {
                    let t = a[c][k] * f;
                    a[r][k] -= t;
                }
            }
        }
    }
    debug_assert!(d.is_integer());
    d.to_integer()
}

/// Rank of a family of vectors over `Q`.
pub fn rank(vectors: &[Point]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let dim = vectors[0].len();
    let mut rows: Vec<Vec<Q>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| Q::from_integer(x as i128)).collect())
        .collect();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let pv = rows[r][c];
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c] / pv;
                for k in 0..dim {
                    let t = rows[r][k] * f;
                    rows[i][k] -= t;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Solves `Σ x_i · columns[i] = target` over `Q` for linearly independent
/// columns. Returns `None` when the target is outside their span.
pub fn solve_in_span(columns: &[Point], target: &[i64]) -> Option<Vec<Ratio<i128>>> {
    let k = columns.len();
    let dim = target.len();
    // augmented system, dim equations in k unknowns
    let mut a: Vec<Vec<Q>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Q> = (0..k).map(|c| Q::from_integer(columns[c][r] as i128)).collect();
            row.push(Q::from_integer(target[r] as i128));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..dim).find(|&i| !a[i][c].is_zero()) else {
            return None; // dependent columns
        };
        a.swap(p, r);
        let pv = a[r][c];
        for i in 0..dim {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c] / pv;
                for j in c..=k {
                    let t = a[r][j] * f;
                    a[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if (r..dim).any(|i| !a[i][k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| a[i][k] / a[i][i]).collect())
}

/// gcd of all maximal minors of a family of `k ≤ dim` vectors. Equals 1
/// exactly when the family extends to a basis of `Z^dim`; 0 when dependent.
pub fn gcd_maximal_minors(vectors: &[Point]) -> i128 {
    let k = vectors.len();
    if k == 0 {
        return 1;
    }
    let dim = vectors[0].len();
    let mut g: i128 = 0;
    for rows in subsets(dim, k) {
        let cols: Vec<Point> = vectors.iter().map(|v| rows.iter().map(|&r| v[r]).collect()).collect();
        g = g.gcd(&det(&cols));
        if g == 1 {
            break;
        }
    }
    g
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Inverse of a unimodular matrix given by columns; `None` if `|det| != 1`.
/// The result is again given by columns.
pub fn inverse_unimodular(columns: &[Point]) -> Option<Vec<Point>> {
    let n = columns.len();
    if det(columns).abs() != 1 {
        return None;
    }
    let mut inv = Vec::with_capacity(n);
    for e in 0..n {
        let mut target = vec![0i64; n];
        target[e] = 1;
        let x = solve_in_span(columns, &target)?;
        inv.push(x);
    }
    // inv[e] = coordinates of basis vector e; the inverse matrix has these as columns
    Some(
        inv.into_iter()
            .map(|col| col.into_iter().map(|q| q.to_integer() as i64).collect())
            .collect(),
    )
}

/// Applies a matrix given by columns to a vector of coordinates.
pub fn apply(columns: &[Point], coords: &[i64], out_dim: usize) -> Point {
    let mut v = vec![0i64; out_dim];
    for (c, &x) in columns.iter().zip(coords) {
        for (vi, ci) in v.iter_mut().zip(c) {
            *vi += x * ci;
        }
    }
    v
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, x| g.gcd(x)) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_membership() {
        let h = Hnf::new(1, &[vec![2]]);
        assert!(h.contains(&[4]));
        assert!(!h.contains(&[3]));
        assert_eq!(h.reduce(&[-3]), vec![1]);

        let h = Hnf::new(2, &[vec![2, 0], vec![1, 1]]);
        assert_eq!(h.rank(), 2);
        assert!(h.contains(&[3, 1]));
        assert!(!h.contains(&[1, 0]));
        assert!(h.contains(&[0, 2]));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = Hnf::new(3, &[vec![1, 2, 3], vec![0, 1, 1]]);
        let b = Hnf::new(3, &[vec![1, 3, 4], vec![0, -1, -1], vec![2, 5, 7]]);
        assert_eq!(a, b);
    }

    #[test]
    fn hnf_rank_deficient_and_zero() {
        let h = Hnf::new(2, &[vec![0, 0]]);
        assert_eq!(h.rank(), 0);
        assert!(h.contains(&[0, 0]));
        assert!(!h.contains(&[0, 1]));
        let h = Hnf::new(2, &[vec![2, 4], vec![3, 6]]);
        assert_eq!(h.basis(), vec![vec![1, 2]]);
    }

    #[test]
    fn determinants_and_minors() {
        assert_eq!(det(&[vec![1, 0], vec![-1, -1]]), -1);
        assert_eq!(det(&[vec![1, 0], vec![1, 2]]), 2);
        assert_eq!(gcd_maximal_minors(&[vec![1, 1, 1]]), 1);
        assert_eq!(gcd_maximal_minors(&[vec![2, 4, 0]]), 2);
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
    }

    #[test]
    fn unimodular_inverse() {
        let cols = vec![vec![1, 1], vec![0, 1]];
        let inv = inverse_unimodular(&cols).unwrap();
        let x = apply(&inv, &apply(&cols, &[3, -2], 2), 2);
        assert_eq!(x, vec![3, -2]);
        assert!(inverse_unimodular(&[vec![2, 0], vec![0, 1]]).is_none());
    }

    #[test]
    fn span_solve() {
        let x = solve_in_span(&[vec![1, 0, 1], vec![0, 1, 1]], &[2, 3, 5]).unwrap();
        assert_eq!(x, vec![Q::from_integer(2), Q::from_integer(3)]);
        assert!(solve_in_span(&[vec![1, 0, 1]], &[1, 1, 1]).is_none());
    }
}
