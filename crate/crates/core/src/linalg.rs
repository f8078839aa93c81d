//! Exact elimination over a [`Field`].

use crate::field::Field;

/// Incrementally maintained reduced row-echelon basis of a subspace of F^n.
///
/// Rows may carry a trailing payload of arbitrary length. Pivots are only
/// searched in the first `width` coordinates and every row operation is
/// applied to the payload as well, so a row whose leading part is the unit
/// vector e_w carries in its payload the image of e_w.
#[derive(Clone, Debug)]
pub struct Basis<F> {
    width: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Basis<F> {
    pub fn new(width: usize) -> Self {
        Basis {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    /// Reduce `v` against the basis. Returns the residual.
    fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        v
    }

    /// Insert a vector (leading part plus optional payload). Returns `true`
    /// when the rank grew.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        assert!(v.len() >= self.width, "vector shorter than basis width");
        let mut v = self.reduce(v);
        let Some(p) = v[..self.width].iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        // keep rows sorted by pivot
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Whether the leading part of `v` lies in the span.
    pub fn contains(&self, v: &[F]) -> bool {
        // zip in reduce() truncates row payloads to the leading part
        let r = self.reduce(v[..self.width].to_vec());
        r.iter().all(|x| x.is_zero())
    }

    /// Coordinates `w` such that the unit vector e_w is in the span.
    ///
    /// In reduced echelon form e_w is in the span iff some row's leading part
    /// is exactly e_w.
    pub fn unit_coordinates(&self) -> Vec<usize> {
        self.rows
            .iter()
            .zip(&self.pivots)
            .filter(|(row, &p)| {
                row[..self.width]
                    .iter()
                    .enumerate()
                    .all(|(j, x)| j == p || x.is_zero())
            })
            .map(|(_, &p)| p)
            .collect()
    }

    /// Payload carried by the row whose leading part is e_w, if any.
    pub fn unit_payload(&self, w: usize) -> Option<&[F]> {
        let at = self.pivots.binary_search(&w).ok()?;
        let row = &self.rows[at];
        let unit = row[..self.width]
            .iter()
            .enumerate()
            .all(|(j, x)| j == w || x.is_zero());
        unit.then(|| &row[self.width..])
    }
}

/// Rank of a set of vectors (rows), all of equal length.
pub fn rank<F: Field>(vectors: &[Vec<F>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut basis = Basis::new(first.len());
    for v in vectors {
        basis.insert(v.clone());
    }
    basis.rank()
}

/// Determinant of a square matrix given as rows.
pub fn determinant<F: Field>(matrix: &[Vec<F>]) -> F {
    let n = matrix.len();
    let mut a: Vec<Vec<F>> = matrix.to_vec();
    for row in &a {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
    }
    let mut det = F::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return F::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        let inv = p.inv().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() * inv.clone();
            let (top, bottom) = a.split_at_mut(r);
            for (x, p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = x.clone() - f.clone() * p.clone();
            }
        }
    }
    det
}
