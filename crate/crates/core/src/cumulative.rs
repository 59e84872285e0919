//! Conjugation by the lower-triangular summation matrix `D`.
//!
//! A table of cell masses `F` maps to its cumulative array `D F Dᵀ` (2-D
//! running sums, the discrete bivariate CDF) and a marginal `p` to `D p`
//! (running sums). `D` itself is only built for test oracles; the transforms
//! run as prefix sums in `O(nm)`.
//!
//! Indices are 0-based. The row and column "before" index 0 are an implicit
//! zero border rather than stored cells.

use crate::error::{Error, Result};
use crate::numeric::{Scalar, Tolerance};
use crate::tropical::{ExtendedTropical, TropicalMatrix};

/// Dense row-major `rows × cols` array of finite scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct Array2<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Array2<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(bad) = data.iter().find(|v| !v.is_valid()) {
            return Err(Error::InvalidValue(bad.to_string()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::EntryCount {
                expected: m,
                actual: bad.len(),
            });
        }
        Self::new(n, m, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Array2<U> {
        Array2 {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Entry with the implicit zero border: `(i, j)` are shifted by one so
    /// that index 0 is the border.
    fn bordered(&self, i: usize, j: usize) -> T {
        if i == 0 || j == 0 {
            T::zero()
        } else {
            self.get(i - 1, j - 1).clone()
        }
    }

    pub fn eq_within(&self, other: &Self, tol: Tolerance) -> bool {
        self.shape() == other.shape()
            && self.data.iter().zip(&other.data).all(|(a, b)| a.eq_within(b, tol))
    }

    pub fn to_tropical(&self) -> TropicalMatrix<T> {
        let entries = self.data.iter().cloned().map(ExtendedTropical::Finite).collect();
        TropicalMatrix::new(self.rows, self.cols, entries).expect("shape already validated")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array(self.row(i).iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }
}

fn shape_mismatch<T>(op: &'static str, a: &Array2<T>, b: &Array2<T>) -> Error {
    Error::ShapeMismatch {
        op,
        left_rows: a.rows,
        left_cols: a.cols,
        right_rows: b.rows,
        right_cols: b.cols,
    }
}

/// A nonnegative marginal vector with its total mass.
#[derive(Debug, Clone, PartialEq)]
pub struct MassVector<T> {
    masses: Vec<T>,
    sigma: T,
}

impl<T: Scalar> MassVector<T> {
    /// Rejects empty, negative, invalid and all-zero input.
    pub fn new(masses: Vec<T>) -> Result<Self> {
        let v = Self::new_allow_zero(masses)?;
        if v.sigma == T::zero() {
            return Err(Error::ZeroMass);
        }
        Ok(v)
    }

    /// Like [`MassVector::new`] but accepts the degenerate all-zero vector.
    pub fn new_allow_zero(masses: Vec<T>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::EmptyShape { rows: 0, cols: 1 });
        }
        for (index, m) in masses.iter().enumerate() {
            if !m.is_valid() {
                return Err(Error::InvalidValue(m.to_string()));
            }
            if m.is_negative() {
                return Err(Error::NegativeMass {
                    index,
                    value: m.to_plain_string(),
                });
            }
        }
        let sigma = masses.iter().fold(T::zero(), |acc, m| acc.add(m));
        Ok(Self { masses, sigma })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn sigma(&self) -> &T {
        &self.sigma
    }

    /// Every mass multiplied by a nonnegative `factor`.
    pub fn scaled(&self, factor: &T) -> Result<Self> {
        Self::new_allow_zero(self.masses.iter().map(|m| m.mul(factor)).collect())
    }
}

/// Nonnegative `n × m` table of cell masses.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable<T> {
    cells: Array2<T>,
}

impl<T: Scalar> ContingencyTable<T> {
    pub fn new(cells: Array2<T>) -> Result<Self> {
        if let Some(k) = cells.data.iter().position(Scalar::is_negative) {
            return Err(Error::NegativeCell {
                row: k / cells.cols,
                col: k % cells.cols,
                value: cells.data[k].to_plain_string(),
            });
        }
        Ok(Self { cells })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(Array2::from_rows(rows)?)
    }

    pub fn cells(&self) -> &Array2<T> {
        &self.cells
    }

    pub fn into_cells(self) -> Array2<T> {
        self.cells
    }

    pub fn rows(&self) -> usize {
        self.cells.rows
    }

    pub fn cols(&self) -> usize {
        self.cells.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        self.cells.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        self.cells.get(i, j)
    }

    /// `F 1`.
    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows())
            .map(|i| self.cells.row(i).iter().fold(T::zero(), |acc, v| acc.add(v)))
            .collect()
    }

    /// `1ᵀ F`.
    pub fn col_sums(&self) -> Vec<T> {
        let mut sums = vec![T::zero(); self.cols()];
        for i in 0..self.rows() {
            for (s, v) in sums.iter_mut().zip(self.cells.row(i)) {
                *s = s.add(v);
            }
        }
        sums
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.cells.to_json()
    }
}

/// Running sums `D p` of a marginal: nondecreasing, ending at `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeVector<T> {
    values: Vec<T>,
}

impl<T: Scalar> CumulativeVector<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> &T {
        self.values.last().expect("cumulative vectors are nonempty")
    }

    /// As an `n × 1` tropical column.
    pub fn to_column(&self) -> TropicalMatrix<T> {
        let entries = self.values.iter().cloned().map(ExtendedTropical::Finite).collect();
        TropicalMatrix::new(self.values.len(), 1, entries).expect("nonempty")
    }
}

/// A cumulative array `D F Dᵀ`: nonnegative, nondecreasing in both indices,
/// and Monge with respect to the implicit zero border.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeArray<T> {
    values: Array2<T>,
}

impl<T: Scalar> CumulativeArray<T> {
    /// Validates membership in the image of `F ↦ D F Dᵀ` over nonnegative
    /// tables, i.e. that every second difference is `≥ −tol`.
    pub fn new(values: Array2<T>, tol: Tolerance) -> Result<Self> {
        diff_array(&values, tol)?;
        Ok(Self { values })
    }

    pub(crate) fn from_trusted(values: Array2<T>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &Array2<T> {
        &self.values
    }

    pub fn into_values(self) -> Array2<T> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        self.values.get(i, j)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values.shape()
    }

    pub fn to_tropical(&self) -> TropicalMatrix<T> {
        self.values.to_tropical()
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.values.to_json()
    }
}

/// The `n × n` summation matrix, `D[i][l] = 1` iff `l ≤ i`, so that
/// `(D p)_i = Σ_{l≤i} p_l`. Only used by oracles.
pub fn d_matrix<T: Scalar>(n: usize) -> Result<Array2<T>> {
    let mut d = Array2::zeros(n, n)?;
    for i in 0..n {
        for l in 0..=i {
            d.set(i, l, T::one());
        }
    }
    Ok(d)
}

pub fn cum_vector<T: Scalar>(p: &MassVector<T>) -> CumulativeVector<T> {
    let mut acc = T::zero();
    let values = p
        .masses
        .iter()
        .map(|m| {
            acc = acc.add(m);
            acc.clone()
        })
        .collect();
    CumulativeVector { values }
}

/// 2-D prefix sums of a table.
pub fn cum_array<T: Scalar>(table: &ContingencyTable<T>) -> CumulativeArray<T> {
    let cells = &table.cells;
    let (n, m) = cells.shape();
    let mut out: Vec<T> = Vec::with_capacity(n * m);
    for i in 0..n {
        let mut row_acc = T::zero();
        for j in 0..m {
            row_acc = row_acc.add(cells.get(i, j));
            let above = if i == 0 { T::zero() } else { out[(i - 1) * m + j].clone() };
            out.push(above.add(&row_acc));
        }
    }
    CumulativeArray::from_trusted(Array2 {
        rows: n,
        cols: m,
        data: out,
    })
}

/// First differences; inverse of [`cum_vector`].
pub fn diff_vector<T: Scalar>(c: &[T]) -> Result<MassVector<T>> {
    let mut prev = T::zero();
    let mut masses = Vec::with_capacity(c.len());
    for (index, v) in c.iter().enumerate() {
        let d = v.sub(&prev);
        if d.is_negative() {
            return Err(Error::NegativeMass {
                index,
                value: d.to_plain_string(),
            });
        }
        masses.push(d);
        prev = v.clone();
    }
    MassVector::new_allow_zero(masses)
}

/// Signed second differences
/// `c[i][j] − c[i−1][j] − c[i][j−1] + c[i−1][j−1]` with a zero border.
pub fn second_differences<T: Scalar>(c: &Array2<T>) -> Array2<T> {
    let (n, m) = c.shape();
    let mut data = Vec::with_capacity(n * m);
    for i in 1..=n {
        for j in 1..=m {
            let d = c
                .bordered(i, j)
                .sub(&c.bordered(i - 1, j))
                .sub(&c.bordered(i, j - 1))
                .add(&c.bordered(i - 1, j - 1));
            data.push(d);
        }
    }
    Array2 { rows: n, cols: m, data }
}

/// Strict inverse of [`cum_array`]: fails on the first second difference
/// below `−tol`. Differences in `[−tol, 0)` are clamped to zero.
pub fn diff_array<T: Scalar>(c: &Array2<T>, tol: Tolerance) -> Result<ContingencyTable<T>> {
    let mut cells = second_differences(c);
    let cols = cells.cols;
    for (k, v) in cells.data.iter_mut().enumerate() {
        if v.is_negative() {
            if !T::zero().le_within(v, tol) {
                return Err(Error::NegativeCell {
                    row: k / cols,
                    col: k % cols,
                    value: v.to_plain_string(),
                });
            }
            *v = T::zero();
        }
    }
    Ok(ContingencyTable { cells })
}

/// Monge (supermodularity) test over all adjacent 2×2 blocks, including the
/// blocks that straddle the implicit zero border:
/// `c[i][j] + c[i+1][j+1] ≥ c[i][j+1] + c[i+1][j]`.
pub fn is_monge<T: Scalar>(c: &Array2<T>) -> bool {
    is_monge_within(c, Tolerance::EXACT)
}

pub fn is_monge_within<T: Scalar>(c: &Array2<T>, tol: Tolerance) -> bool {
    let (n, m) = c.shape();
    (0..n).all(|i| {
        (0..m).all(|j| {
            let diag = c.bordered(i, j).add(&c.bordered(i + 1, j + 1));
            let anti = c.bordered(i, j + 1).add(&c.bordered(i + 1, j));
            anti.le_within(&diag, tol)
        })
    })
}

/// First `(i, j)` where `cum(a)[i][j] > cum(b)[i][j]`, if any.
pub fn d_order_violation<T: Scalar>(
    a: &ContingencyTable<T>,
    b: &ContingencyTable<T>,
    tol: Tolerance,
) -> Result<Option<(usize, usize)>> {
    if a.shape() != b.shape() {
        return Err(shape_mismatch("d_order_le", &a.cells, &b.cells));
    }
    let ca = cum_array(a);
    let cb = cum_array(b);
    let m = a.cols();
    Ok(ca
        .values
        .data
        .iter()
        .zip(&cb.values.data)
        .position(|(x, y)| !x.le_within(y, tol))
        .map(|k| (k / m, k % m)))
}

/// `a ⪯_D b`: the cumulative array of `a` is entrywise below that of `b`.
pub fn d_order_le<T: Scalar>(
    a: &ContingencyTable<T>,
    b: &ContingencyTable<T>,
    tol: Tolerance,
) -> Result<bool> {
    Ok(d_order_violation(a, b, tol)?.is_none())
}

/// Row sums of `u` against the max-plus product of its row-wise running sums
/// `U Dᵀ` with the all-𝟙 column. Equal whenever `u` is nonnegative.
pub fn lemma1_check<T: Scalar>(u: &Array2<T>, tol: Tolerance) -> bool {
    let (n, m) = u.shape();
    let mut running = Vec::with_capacity(n * m);
    for i in 0..n {
        let mut acc = T::zero();
        for v in u.row(i) {
            acc = acc.add(v);
            running.push(acc.clone());
        }
    }
    let running = Array2 { rows: n, cols: m, data: running }.to_tropical();
    let ones = TropicalMatrix::filled(m, 1, ExtendedTropical::one()).expect("m > 0");
    let tropical = running.odot(&ones).expect("conformable");

    (0..n).all(|i| {
        let sum = u.row(i).iter().fold(T::zero(), |acc, v| acc.add(v));
        tropical
            .get(i, 0)
            .eq_within(&ExtendedTropical::Finite(sum), tol)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn arr(rows: &[&[(i64, i64)]]) -> Array2<Rational> {
        Array2::from_rows(rows.iter().map(|r| r.iter().map(|&(n, d)| q(n, d)).collect()).collect())
            .unwrap()
    }

    fn tenths(rows: &[&[i64]]) -> Array2<Rational> {
        Array2::from_rows(rows.iter().map(|r| r.iter().map(|&n| q(n, 10)).collect()).collect())
            .unwrap()
    }

    fn mv(xs: &[i64]) -> MassVector<Rational> {
        MassVector::new_allow_zero(xs.iter().map(|&n| q(n, 10)).collect()).unwrap()
    }

    /// Independent oracle: `D F Dᵀ` by explicit matrix products.
    fn dfdt_oracle(f: &Array2<Rational>) -> Array2<Rational> {
        let (n, m) = f.shape();
        let dn = d_matrix::<Rational>(n).unwrap();
        let dm = d_matrix::<Rational>(m).unwrap();
        let mut out = Array2::zeros(n, m).unwrap();
        for i in 0..n {
            for j in 0..m {
                let mut s = q(0, 1);
                for l in 0..n {
                    for k in 0..m {
                        s += dn.get(i, l) * f.get(l, k) * dm.get(j, k);
                    }
                }
                out.set(i, j, s);
            }
        }
        out
    }

    #[test]
    fn d_matrix_examples() {
        assert_eq!(d_matrix::<Rational>(1).unwrap(), arr(&[&[(1, 1)]]));
        assert_eq!(
            d_matrix::<Rational>(2).unwrap(),
            arr(&[&[(1, 1), (0, 1)], &[(1, 1), (1, 1)]])
        );
    }

    #[test]
    fn cum_vector_examples() {
        let c = cum_vector(&mv(&[2, 5, 3]));
        assert_eq!(c.values(), &[q(2, 10), q(7, 10), q(1, 1)]);
        let d = d_matrix::<Rational>(3).unwrap();
        for i in 0..3 {
            let oracle = (0..3).fold(q(0, 1), |s, l| s + d.get(i, l) * q([2, 5, 3][l], 10));
            assert_eq!(c.values()[i], oracle);
        }
        assert_eq!(cum_vector(&mv(&[0, 0])).values(), &[q(0, 1), q(0, 1)]);
        assert_eq!(cum_vector(&mv(&[7])).values(), &[q(7, 10)]);
        assert_eq!(c.last(), mv(&[2, 5, 3]).sigma());
    }

    #[test]
    fn cum_array_examples() {
        let f = ContingencyTable::new(tenths(&[&[5, 0], &[0, 5]])).unwrap();
        let c = cum_array(&f);
        assert_eq!(c.values(), &tenths(&[&[5, 5], &[5, 10]]));
        assert_eq!(c.values(), &dfdt_oracle(f.cells()));

        let z: ContingencyTable<Rational> = ContingencyTable::new(Array2::zeros(2, 3).unwrap()).unwrap();
        assert_eq!(cum_array(&z).values(), &Array2::zeros(2, 3).unwrap());
        let one = ContingencyTable::new(tenths(&[&[4]])).unwrap();
        assert_eq!(cum_array(&one).values(), &tenths(&[&[4]]));
    }

    #[test]
    fn cum_array_matches_matrix_oracle_on_rectangles() {
        let f = tenths(&[&[1, 0, 3, 2], &[0, 4, 1, 1], &[2, 2, 0, 5]]);
        let table = ContingencyTable::new(f.clone()).unwrap();
        assert_eq!(cum_array(&table).values(), &dfdt_oracle(&f));
    }

    #[test]
    fn diff_vector_examples() {
        let m = diff_vector(&[q(2, 10), q(7, 10), q(1, 1)]).unwrap();
        assert_eq!(m.masses(), &[q(2, 10), q(5, 10), q(3, 10)]);
        assert_eq!(diff_vector(&[q(3, 1)]).unwrap().masses(), &[q(3, 1)]);
        assert!(matches!(
            diff_vector(&[q(1, 1), q(1, 2)]),
            Err(Error::NegativeMass { index: 1, .. })
        ));
        assert!(diff_vector(&[q(-1, 1)]).is_err());
    }

    #[test]
    fn diff_array_examples() {
        let t = diff_array(&tenths(&[&[5, 5], &[5, 10]]), Tolerance::EXACT).unwrap();
        assert_eq!(t.cells(), &tenths(&[&[5, 0], &[0, 5]]));
        let z = diff_array(&Array2::<Rational>::zeros(3, 2).unwrap(), Tolerance::EXACT).unwrap();
        assert_eq!(z.cells(), &Array2::zeros(3, 2).unwrap());
        let bad = arr(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        assert!(matches!(
            diff_array(&bad, Tolerance::EXACT),
            Err(Error::NegativeCell { row: 0, col: 1, .. })
        ));
        let signed = second_differences(&bad);
        assert_eq!(signed.get(0, 1), &q(-1, 1));
    }

    #[test]
    fn diff_array_float_clamps_within_tolerance() {
        let c = Array2::from_rows(vec![vec![0.5, 0.5 - 1e-13], vec![0.5, 1.0]]).unwrap();
        assert!(diff_array(&c, Tolerance::EXACT).is_err());
        let t = diff_array(&c, Tolerance::new(1e-9).unwrap()).unwrap();
        assert_eq!(*t.get(0, 1), 0.0);
    }

    #[test]
    fn monge_examples() {
        let f = ContingencyTable::new(tenths(&[&[1, 0, 3], &[0, 4, 1]])).unwrap();
        assert!(is_monge(cum_array(&f).values()));
        assert!(!is_monge(&arr(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]])));
        assert!(is_monge(&arr(&[&[(2, 1), (2, 1)], &[(2, 1), (2, 1)]])));
        // interior supermodular but decreasing along the border
        assert!(!is_monge(&arr(&[&[(1, 1)], &[(0, 1)]])));
    }

    #[test]
    fn cumulative_array_validation() {
        assert!(CumulativeArray::new(tenths(&[&[5, 5], &[5, 10]]), Tolerance::EXACT).is_ok());
        assert!(CumulativeArray::new(tenths(&[&[10, 0], &[0, 10]]), Tolerance::EXACT).is_err());
    }

    #[test]
    fn d_order_examples() {
        let a = ContingencyTable::new(tenths(&[&[0, 5], &[5, 0]])).unwrap();
        let b = ContingencyTable::new(tenths(&[&[5, 0], &[0, 5]])).unwrap();
        assert!(d_order_le(&a, &a, Tolerance::EXACT).unwrap());
        assert!(d_order_le(&a, &b, Tolerance::EXACT).unwrap());
        assert!(!d_order_le(&b, &a, Tolerance::EXACT).unwrap());
        assert_eq!(d_order_violation(&b, &a, Tolerance::EXACT).unwrap(), Some((0, 0)));
        let c = ContingencyTable::new(tenths(&[&[5, 0, 0]])).unwrap();
        assert!(d_order_le(&a, &c, Tolerance::EXACT).is_err());
    }

    #[test]
    fn row_sums_as_max_plus_products() {
        let u = tenths(&[&[1, 0, 3], &[2, 2, 2], &[0, 0, 9]]);
        assert!(lemma1_check(&u, Tolerance::EXACT));
        assert!(lemma1_check(&Array2::<Rational>::zeros(2, 2).unwrap(), Tolerance::EXACT));
        assert!(!lemma1_check(&arr(&[&[(1, 1), (-1, 1)]]), Tolerance::EXACT));
    }

    #[test]
    fn mass_vector_validation() {
        assert!(MassVector::<Rational>::new(vec![]).is_err());
        assert!(MassVector::new(vec![q(0, 1)]).is_err());
        assert!(MassVector::new_allow_zero(vec![q(0, 1)]).is_ok());
        assert!(MassVector::new(vec![q(1, 1), q(-1, 2)]).is_err());
        assert!(MassVector::new(vec![f64::NAN]).is_err());
        assert_eq!(mv(&[1, 2, 3]).sigma(), &q(6, 10));
        assert!(ContingencyTable::from_rows(vec![vec![q(-1, 1)]]).is_err());
    }
}
