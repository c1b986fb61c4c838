//! Fraction-free Gauss-Jordan elimination.
//!
//! Rows are cleared of denominators on entry and kept as primitive integer
//! vectors (content 1, positive pivot) in sparse form. The basis held by a
//! [`RowReducer`] is always fully reduced: every pivot column is zero in all
//! other rows. Only the final conversion back to rationals divides.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::rational::Rational;

type SparseRow = Vec<(usize, BigInt)>;

/// Incremental reduced row-echelon basis of a row space.
#[derive(Clone, Debug)]
pub struct RowReducer {
    cols: usize,
    /// pivot column -> reduced primitive row whose first entry is that pivot
    rows: BTreeMap<usize, SparseRow>,
}

impl RowReducer {
    pub fn new(cols: usize) -> Self {
        RowReducer {
            cols,
            rows: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Adds a row; returns `true` if it enlarged the row space.
    pub fn push(&mut self, row: &[Rational]) -> bool {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        let sparse = integer_row(row.iter().enumerate());
        self.push_integer(sparse)
    }

    /// Adds a row given as `(column, value)` pairs in increasing column order.
    pub fn push_sparse(&mut self, row: &[(usize, Rational)]) -> bool {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        let sparse = integer_row(row.iter().map(|(c, v)| (*c, v)));
        self.push_integer(sparse)
    }

    /// Whether the row lies in the current row space.
    pub fn contains(&self, row: &[Rational]) -> bool {
        let sparse = integer_row(row.iter().enumerate());
        self.reduce(sparse).is_empty()
    }

    fn reduce(&self, mut r: SparseRow) -> SparseRow {
        // Entries at pivot columns are removed one at a time. Combining with a
        // basis row never creates entries at other pivot columns because the
        // basis is fully reduced.
        loop {
            let hit = r
                .iter()
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((c, coef)) = hit else { break };
            let b = &self.rows[&c];
            let piv = &b[0].1;
            r = combine(piv, &r, &coef, b);
            make_primitive(&mut r);
        }
        r
    }

    fn push_integer(&mut self, r: SparseRow) -> bool {
        if r.is_empty() {
            return false;
        }
        let mut r = self.reduce(r);
        if r.is_empty() {
            return false;
        }
        if r[0].1.is_negative() {
            for (_, v) in r.iter_mut() {
                *v = -&*v;
            }
        }
        let p = r[0].0;
        let piv = r[0].1.clone();
        for b in self.rows.values_mut() {
            if let Some(coef) = entry(b, p) {
                let mut nb = combine(&piv, b, &coef, &r);
                make_primitive(&mut nb);
                if nb[0].1.is_negative() {
                    for (_, v) in nb.iter_mut() {
                        *v = -&*v;
                    }
                }
                *b = nb;
            }
        }
        self.rows.insert(p, r);
        true
    }

    /// Reduced row-echelon rows over the rationals (pivot entries equal 1),
    /// ordered by pivot column.
    pub fn rref_rows(&self) -> Vec<Vec<Rational>> {
        self.rows
            .values()
            .map(|r| {
                let piv = &r[0].1;
                let mut dense = vec![Rational::zero(); self.cols];
                for (c, v) in r {
                    dense[*c] = BigRational::new(v.clone(), piv.clone());
                }
                dense
            })
            .collect()
    }

    /// Basis of `{ x : row · x = 0 for every row }`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        for f in 0..self.cols {
            if self.rows.contains_key(&f) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (&p, row) in &self.rows {
                if let Some(coef) = entry(row, f) {
                    v[p] = -BigRational::new(coef, row[0].1.clone());
                }
            }
            out.push(v);
        }
        out
    }
}

fn entry(row: &SparseRow, col: usize) -> Option<BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| row[i].1.clone())
}

fn integer_row<'a>(entries: impl Iterator<Item = (usize, &'a Rational)> + Clone) -> SparseRow {
    let mut l = BigInt::one();
    for (_, v) in entries.clone() {
        if !v.is_zero() && !v.denom().is_one() {
            l = l.lcm(v.denom());
        }
    }
    let mut r: SparseRow = entries
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (c, v.numer() * (&l / v.denom())))
        .collect();
    make_primitive(&mut r);
    r
}

/// `a * x - b * y` on sparse rows.
fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map_or(usize::MAX, |e| e.0);
        let cy = y.get(j).map_or(usize::MAX, |e| e.0);
        if cx < cy {
            out.push((cx, a * &x[i].1));
            i += 1;
        } else if cy < cx {
            out.push((cy, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((cx, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn make_primitive(r: &mut SparseRow) {
    let mut g = BigInt::zero();
    for (_, v) in r.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for (_, v) in r.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Reduced row-echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let red = reducer_of(m);
    let mut rows = red.rref_rows();
    let pivots = red.pivots();
    rows.resize(m.rows(), vec![Rational::zero(); m.cols()]);
    (Matrix::from_rows_with_cols(&rows, m.cols()), pivots)
}

pub fn reducer_of(m: &Matrix) -> RowReducer {
    let mut red = RowReducer::new(m.cols());
    for i in 0..m.rows() {
        red.push(m.row(i));
        if red.is_full() {
            break;
        }
    }
    red
}

pub fn rank(m: &Matrix) -> usize {
    reducer_of(m).rank()
}

/// Basis of the kernel `{ x : m·x = 0 }`.
pub fn nullspace(m: &Matrix) -> Vec<Vec<Rational>> {
    reducer_of(m).nullspace()
}

/// Basis of the row space, in reduced echelon form.
pub fn row_space(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut red = RowReducer::new(cols);
    for r in rows {
        red.push(r);
    }
    red.rref_rows()
}

/// Some solution of `m·x = b`, or `None` when `b` is outside the column space.
pub fn solve(m: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(m.rows(), b.len());
    // Augmented system [m | b]; consistent iff no pivot lands in the last column.
    let n = m.cols();
    let mut red = RowReducer::new(n + 1);
    for (i, bi) in b.iter().enumerate() {
        let mut row = m.row(i).to_vec();
        row.push(bi.clone());
        red.push(&row);
    }
    if red.pivots().contains(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for row in red.rref_rows() {
        let p = row.iter().position(|v| !v.is_zero()).expect("nonzero row");
        x[p] = row[n].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    assert!(m.is_square());
    let n = m.rows();
    let mut red = RowReducer::new(2 * n);
    for i in 0..n {
        let mut row = m.row(i).to_vec();
        row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
        red.push(&row);
    }
    let pivots = red.pivots();
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let rows = red.rref_rows();
    let mut inv = Matrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate().take(n) {
        for j in 0..n {
            inv[(i, j)] = row[n + j].clone();
        }
    }
    Some(inv)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("right-hand side is not in the column space")]
pub struct NotInColumnSpace;

/// The least-norm solution of `m·x = b` under the standard dot product.
///
/// `x = mᵀ·y` with `(m·mᵀ)·y = b`; the result is orthogonal to the kernel of
/// `m`, hence unique and of minimal norm among all solutions.
pub fn min_norm_preimage(m: &Matrix, b: &[Rational]) -> Result<Vec<Rational>, NotInColumnSpace> {
    if solve(m, b).is_none() {
        return Err(NotInColumnSpace);
    }
    let mt = m.transpose();
    let gram = m.mul(&mt);
    let y = solve(&gram, b).ok_or(NotInColumnSpace)?;
    Ok(mt.mul_vec(&y))
}
