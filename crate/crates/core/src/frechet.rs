//! Fréchet bounds of the class `H(p, q)` of nonnegative tables with row sums
//! `p` and column sums `q`.
//!
//! Working in cumulative space (`F̄ = D F Dᵀ`, `α = D p`, `β = qᵀ Dᵀ`), the
//! class is cut out by the max-plus linear system `F̄ ⊙ 𝟙 = α`,
//! `𝟙ᵀ ⊙ F̄ = βᵀ`. Its greatest subsolution `(α / 𝟙) ∧ (𝟙ᵀ \ βᵀ)` is the
//! upper bound; the lower bound comes from a greedy sweep that fills the
//! array from the last row and column inwards. The closed forms
//! `min(α_i, β_j)` and `max(0, α_i + β_j − σ)` are kept alongside as oracles.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::cumulative::{
    cum_array, cum_vector, d_order_violation, diff_array, Array2, ContingencyTable,
    CumulativeArray, CumulativeVector, MassVector,
};
use crate::error::{Error, Result};
use crate::numeric::{Scalar, Tolerance};
use crate::tropical::{ExtendedTropical, TropicalMatrix};

/// A pair of marginals with equal total mass.
#[derive(Debug, Clone, PartialEq)]
pub struct FrechetInstance<T> {
    p: MassVector<T>,
    q: MassVector<T>,
    tol: Tolerance,
}

impl<T: Scalar> FrechetInstance<T> {
    /// Exact scalars require `Σp = Σq`; floats accept
    /// `|Σp − Σq| ≤ ε·max(σ, 1)`.
    pub fn new(p: MassVector<T>, q: MassVector<T>, tol: Tolerance) -> Result<Self> {
        let scale = p.sigma().to_f64().abs().max(1.0);
        let mass_tol = Tolerance::new(tol.epsilon() * scale)?;
        if !p.sigma().eq_within(q.sigma(), mass_tol) {
            return Err(Error::Infeasible {
                p_sum: p.sigma().to_plain_string(),
                q_sum: q.sigma().to_plain_string(),
            });
        }
        Ok(Self { p, q, tol })
    }

    /// Convenience constructor from raw masses; zero total mass is allowed.
    pub fn from_masses(p: Vec<T>, q: Vec<T>, tol: Tolerance) -> Result<Self> {
        Self::new(
            MassVector::new_allow_zero(p)?,
            MassVector::new_allow_zero(q)?,
            tol,
        )
    }

    pub fn p(&self) -> &MassVector<T> {
        &self.p
    }

    pub fn q(&self) -> &MassVector<T> {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn m(&self) -> usize {
        self.q.len()
    }

    pub fn sigma(&self) -> &T {
        self.p.sigma()
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    /// `α = D p`.
    pub fn alpha(&self) -> CumulativeVector<T> {
        cum_vector(&self.p)
    }

    /// `β = qᵀ Dᵀ`.
    pub fn beta(&self) -> CumulativeVector<T> {
        cum_vector(&self.q)
    }

    /// Both marginals multiplied by `factor`.
    pub fn scaled(&self, factor: &T) -> Result<Self> {
        Self::new(self.p.scaled(factor)?, self.q.scaled(factor)?, self.tol)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p.masses().iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "q": self.q.masses().iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    fn check_shape(&self, table: &ContingencyTable<T>, op: &'static str) -> Result<()> {
        if table.shape() != (self.n(), self.m()) {
            return Err(Error::ShapeMismatch {
                op,
                left_rows: table.rows(),
                left_cols: table.cols(),
                right_rows: self.n(),
                right_cols: self.m(),
            });
        }
        Ok(())
    }
}

/// Row sums equal `p` and column sums equal `q`.
pub fn check_membership_classical<T: Scalar>(
    table: &ContingencyTable<T>,
    inst: &FrechetInstance<T>,
) -> Result<bool> {
    inst.check_shape(table, "check_membership_classical")?;
    let tol = inst.tol;
    let rows_ok = table
        .row_sums()
        .iter()
        .zip(inst.p.masses())
        .all(|(s, p)| s.eq_within(p, tol));
    let cols_ok = table
        .col_sums()
        .iter()
        .zip(inst.q.masses())
        .all(|(s, q)| s.eq_within(q, tol));
    Ok(rows_ok && cols_ok)
}

/// Membership through the cumulative array: `F̄ ⊙ 𝟙 = α` and
/// `𝟙ᵀ ⊙ F̄ = βᵀ`, evaluated with max-plus products.
pub fn check_membership_tropical<T: Scalar>(
    table: &ContingencyTable<T>,
    inst: &FrechetInstance<T>,
) -> Result<bool> {
    inst.check_shape(table, "check_membership_tropical")?;
    let (n, m) = (inst.n(), inst.m());
    let cum = cum_array(table).to_tropical();

    let ones_col = TropicalMatrix::filled(m, 1, ExtendedTropical::one())?;
    let ones_row = TropicalMatrix::filled(1, n, ExtendedTropical::one())?;
    let row_max = cum.odot(&ones_col)?;
    let col_max = ones_row.odot(&cum)?;

    Ok(row_max.eq_within(&inst.alpha().to_column(), inst.tol)?
        && col_max.eq_within(&inst.beta().to_column().transpose(), inst.tol)?)
}

/// Upper bound as the greatest subsolution `(α / 𝟙) ∧ (𝟙ᵀ \ βᵀ)`.
pub fn upper_bound_residuated<T: Scalar>(inst: &FrechetInstance<T>) -> CumulativeArray<T> {
    let (n, m) = (inst.n(), inst.m());
    let alpha = inst.alpha().to_column();
    let beta_row = inst.beta().to_column().transpose();
    let ones_col = TropicalMatrix::filled(m, 1, ExtendedTropical::one()).expect("m > 0");
    let ones_row = TropicalMatrix::filled(1, n, ExtendedTropical::one()).expect("n > 0");

    let row_side = alpha.rdiv(&ones_col).expect("n x 1 / m x 1");
    let col_side = ones_row.ldiv(&beta_row).expect("1 x n \\ 1 x m");
    let upper = row_side.wedge(&col_side).expect("both n x m");

    let values = upper
        .into_entries()
        .into_iter()
        .map(|e| e.into_finite().expect("finite marginals give finite residuals"))
        .collect();
    CumulativeArray::from_trusted(Array2::new(n, m, values).expect("n x m"))
}

/// Closed form `min(α_i, β_j)`.
pub fn upper_bound_closed<T: Scalar>(inst: &FrechetInstance<T>) -> CumulativeArray<T> {
    let alpha = inst.alpha();
    let beta = inst.beta();
    let values = alpha
        .values()
        .iter()
        .flat_map(|a| beta.values().iter().map(move |b| a.min_of(b)))
        .collect();
    CumulativeArray::from_trusted(Array2::new(inst.n(), inst.m(), values).expect("n x m"))
}

/// Closed form `max(0, α_i + β_j − σ)`.
pub fn lower_bound_closed<T: Scalar>(inst: &FrechetInstance<T>) -> CumulativeArray<T> {
    let alpha = inst.alpha();
    let beta = inst.beta();
    let sigma = inst.sigma();
    let zero = T::zero();
    let values = alpha
        .values()
        .iter()
        .flat_map(|a| {
            let zero = &zero;
            beta.values()
                .iter()
                .map(move |b| a.add(b).sub(sigma).max_of(zero))
        })
        .collect();
    CumulativeArray::from_trusted(Array2::new(inst.n(), inst.m(), values).expect("n x m"))
}

/// Traversal used by the greedy sweep. Every variant visits a cell only after
/// the cells below it and to its right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepOrder {
    /// Columns descending in the outer loop, rows descending inside.
    #[default]
    ColumnsOuter,
    /// Rows descending in the outer loop, columns descending inside.
    RowsOuter,
    /// Anti-diagonals `i + j` descending.
    AntiDiagonal,
}

/// Greedy lower bound with the default traversal.
pub fn lower_bound_greedy<T: Scalar>(inst: &FrechetInstance<T>) -> CumulativeArray<T> {
    lower_bound_greedy_with(inst, SweepOrder::ColumnsOuter)
}

/// Greedy lower bound: seed the last column with `α` and the last row with
/// `β`, then fill each remaining cell from its right, lower and lower-right
/// neighbours as `F̄[i+1][j+1]⁻¹ ⊙ (F̄[i][j+1] ⊙ F̄[i+1][j]) ⊕ 𝟙`.
pub fn lower_bound_greedy_with<T: Scalar>(
    inst: &FrechetInstance<T>,
    order: SweepOrder,
) -> CumulativeArray<T> {
    let (n, m) = (inst.n(), inst.m());
    let mut cells = vec![ExtendedTropical::<T>::Bottom; n * m];
    for (i, a) in inst.alpha().values().iter().enumerate() {
        cells[i * m + m - 1] = ExtendedTropical::Finite(a.clone());
    }
    for (j, b) in inst.beta().values().iter().enumerate() {
        cells[(n - 1) * m + j] = ExtendedTropical::Finite(b.clone());
    }

    let one = ExtendedTropical::one();
    let mut fill = |i: usize, j: usize| {
        let corner = cells[(i + 1) * m + j + 1]
            .inv()
            .expect("cells below and to the right are already finite");
        let product = cells[i * m + j + 1].odot(&cells[(i + 1) * m + j]);
        cells[i * m + j] = corner.odot(&product).oplus(&one);
    };

    if n > 1 && m > 1 {
        match order {
            SweepOrder::ColumnsOuter => {
                for j in (0..m - 1).rev() {
                    for i in (0..n - 1).rev() {
                        fill(i, j);
                    }
                }
            }
            SweepOrder::RowsOuter => {
                for i in (0..n - 1).rev() {
                    for j in (0..m - 1).rev() {
                        fill(i, j);
                    }
                }
            }
            SweepOrder::AntiDiagonal => {
                for s in (0..=(n - 2) + (m - 2)).rev() {
                    let lo = s.saturating_sub(m - 2);
                    let hi = s.min(n - 2);
                    for i in (lo..=hi).rev() {
                        fill(i, s - i);
                    }
                }
            }
        }
    }

    let values = cells
        .into_iter()
        .map(|e| e.into_finite().expect("every cell is filled"))
        .collect();
    CumulativeArray::from_trusted(Array2::new(n, m, values).expect("n x m"))
}

/// Cell masses of a cumulative array; fails if a second difference is
/// negative beyond `tol` (the array is not Monge).
pub fn extract_table<T: Scalar>(
    cumulative: &CumulativeArray<T>,
    tol: Tolerance,
) -> Result<ContingencyTable<T>> {
    diff_array(cumulative.values(), tol)
}

/// Northwest-corner allocation of `p` against `q` in the given order.
pub fn northwest_corner<T: Scalar>(p: &[T], q: &[T]) -> Result<Array2<T>> {
    let (n, m) = (p.len(), q.len());
    let mut cells = Array2::zeros(n, m)?;
    let mut rows = p.to_vec();
    let mut cols = q.to_vec();
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if rows[i] <= cols[j] {
            let x = std::mem::replace(&mut rows[i], T::zero());
            cols[j] = cols[j].sub(&x);
            cells.set(i, j, x);
            i += 1;
        } else {
            let x = std::mem::replace(&mut cols[j], T::zero());
            rows[i] = rows[i].sub(&x);
            cells.set(i, j, x);
            j += 1;
        }
    }
    Ok(cells)
}

/// Northwest-corner table under explicit row and column visiting orders,
/// mapped back to the original positions.
pub fn feasible_with_orders<T: Scalar>(
    inst: &FrechetInstance<T>,
    row_order: &[usize],
    col_order: &[usize],
) -> Result<ContingencyTable<T>> {
    let p: Vec<T> = row_order.iter().map(|&i| inst.p.masses()[i].clone()).collect();
    let q: Vec<T> = col_order.iter().map(|&j| inst.q.masses()[j].clone()).collect();
    let permuted = northwest_corner(&p, &q)?;
    let mut cells = Array2::zeros(inst.n(), inst.m())?;
    for (a, &i) in row_order.iter().enumerate() {
        for (b, &j) in col_order.iter().enumerate() {
            cells.set(i, j, permuted.get(a, b).clone());
        }
    }
    ContingencyTable::new(cells)
}

/// A vertex of `H(p, q)`: northwest-corner allocation over row and column
/// orders shuffled by a ChaCha stream seeded with `seed`.
pub fn random_feasible<T: Scalar>(
    inst: &FrechetInstance<T>,
    seed: u64,
) -> Result<ContingencyTable<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<usize> = (0..inst.n()).collect();
    let mut cols: Vec<usize> = (0..inst.m()).collect();
    rows.shuffle(&mut rng);
    cols.shuffle(&mut rng);
    feasible_with_orders(inst, &rows, &cols)
}

/// Upper and lower bounds in both cumulative and mass form.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsResult<T> {
    pub upper_cumulative: CumulativeArray<T>,
    pub lower_cumulative: CumulativeArray<T>,
    pub upper_table: ContingencyTable<T>,
    pub lower_table: ContingencyTable<T>,
}

impl<T: Scalar> BoundsResult<T> {
    pub fn to_json(&self, inst: &FrechetInstance<T>) -> serde_json::Value {
        json!({
            "n": inst.n(),
            "m": inst.m(),
            "sigma": inst.sigma().to_json(),
            "p": inst.to_json()["p"],
            "q": inst.to_json()["q"],
            "upper_cumulative": self.upper_cumulative.to_json(),
            "lower_cumulative": self.lower_cumulative.to_json(),
            "upper_table": self.upper_table.to_json(),
            "lower_table": self.lower_table.to_json(),
        })
    }
}

/// Residuated upper bound, greedy lower bound and their extracted tables.
pub fn compute_bounds<T: Scalar>(inst: &FrechetInstance<T>) -> Result<BoundsResult<T>> {
    let upper_cumulative = upper_bound_residuated(inst);
    let lower_cumulative = lower_bound_greedy(inst);
    let upper_table = extract_table(&upper_cumulative, inst.tol)?;
    let lower_table = extract_table(&lower_cumulative, inst.tol)?;
    Ok(BoundsResult {
        upper_cumulative,
        lower_cumulative,
        upper_table,
        lower_table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SandwichViolation {
    pub side: BoundSide,
    pub row: usize,
    pub col: usize,
}

/// Whether a member table sits between the bounds in the `⪯_D` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SandwichReport {
    /// `F_min ⪯_D F`.
    pub above_lower: bool,
    /// `F ⪯_D F_max`.
    pub below_upper: bool,
    pub first_violation: Option<SandwichViolation>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.above_lower && self.below_upper
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "above_lower": self.above_lower,
            "below_upper": self.below_upper,
            "first_violation": self.first_violation.map(|v| json!({
                "bound": match v.side { BoundSide::Lower => "lower", BoundSide::Upper => "upper" },
                "row": v.row,
                "col": v.col,
            })),
        })
    }
}

/// Checks membership, then `F_min ⪯_D F ⪯_D F_max`.
pub fn sandwich_check<T: Scalar>(
    table: &ContingencyTable<T>,
    inst: &FrechetInstance<T>,
) -> Result<SandwichReport> {
    let bounds = compute_bounds(inst)?;
    sandwich_check_against(table, inst, &bounds)
}

/// [`sandwich_check`] with precomputed bounds.
pub fn sandwich_check_against<T: Scalar>(
    table: &ContingencyTable<T>,
    inst: &FrechetInstance<T>,
    bounds: &BoundsResult<T>,
) -> Result<SandwichReport> {
    if !check_membership_classical(table, inst)? {
        return Err(Error::NotAMember);
    }
    let lower = d_order_violation(&bounds.lower_table, table, inst.tol)?;
    let upper = d_order_violation(table, &bounds.upper_table, inst.tol)?;
    let first_violation = lower
        .map(|(row, col)| SandwichViolation {
            side: BoundSide::Lower,
            row,
            col,
        })
        .or(upper.map(|(row, col)| SandwichViolation {
            side: BoundSide::Upper,
            row,
            col,
        }));
    Ok(SandwichReport {
        above_lower: lower.is_none(),
        below_upper: upper.is_none(),
        first_violation,
    })
}
