//! Closed forms for the Betti numbers `β_{k,n}` and Euler characteristics
//! `χ_{k,n}` of `D_k(Δⁿ)`, and the harness that checks them against each
//! other and against homology computed from the actual complexes.
//!
//! `D_k(Δⁿ)` is homotopy equivalent to a wedge of `β_{k,n}` spheres of
//! dimension `n - k + 1`, so `χ_{k,n} = 1 + (-1)^(n-k+1) β_{k,n}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_or_zero, factorial, stirling2};
use crate::config::ConfigComplex;
use crate::homology::{ChainComplex, HomologyResult, SparseIntMatrix};
use crate::simplicial::SimplicialComplex;
use crate::{Error, Integer, Result};

fn check_range(k: i64, n: i64) -> Result<()> {
    if k < 1 || k > n + 1 {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= n + 1, got k={k} n={n}"
        )));
    }
    Ok(())
}

fn signed(value: Integer, exponent: i64) -> Integer {
    if exponent.rem_euclid(2) == 0 { value } else { -value }
}

/// `β_{k,n} = Σ_{i=0}^{k} (-1)^(i+k+1) C(k, i+1) i^(n+1)`.
pub fn betti_closed(k: i64, n: i64) -> Result<Integer> {
    check_range(k, n)?;
    let mut sum = Integer::zero();
    for i in 0..=k {
        let term = binomial(k, i + 1)? * BigInt::from(i).pow((n + 1) as u32);
        sum += signed(term, i + k + 1);
    }
    Ok(sum)
}

/// `χ_{k,n} = 1 + (-1)^(n-k+1) β_{k,n}`.
pub fn euler_from_formula(k: i64, n: i64) -> Result<Integer> {
    Ok(Integer::one() + signed(betti_closed(k, n)?, n - k + 1))
}

/// `χ_{k,n} = k! Σ_i (-1)^i C(n+1, k+i) S(k+i, k)`, the alternating count
/// of cells of `D_k(Δⁿ)`.
///
/// Defined for every `k >= 0` and `n >= -1`: `k = 0` is the one-point
/// complex and `n = -1` the empty ambient space.
pub fn euler_from_cells(k: i64, n: i64) -> Result<Integer> {
    if k < 0 || n < -1 {
        return Err(Error::InvalidArgument(format!(
            "need k >= 0 and n >= -1, got k={k} n={n}"
        )));
    }
    let mut sum = Integer::zero();
    for i in 0..=(n + 1 - k).max(0) {
        let term = binomial(n + 1, k + i)? * stirling2((k + i) as u64, k as u64);
        sum += signed(term, i);
    }
    Ok(factorial(k as u64) * sum)
}

/// `Y_{k,n} = (k-1)! C(n+1, k-1) - C(n, k-1)` for `3 <= k <= n`.
pub fn y_rank(k: i64, n: i64) -> Result<Integer> {
    if k < 3 || k > n {
        return Err(Error::InvalidArgument(format!(
            "Y is defined for 3 <= k <= n, got k={k} n={n}"
        )));
    }
    Ok(factorial((k - 1) as u64) * binomial(n + 1, k - 1)? - binomial(n, k - 1)?)
}

/// Value assumed for `β_{j,j-1}` when grounding the recurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseConvention {
    /// `β_{j,j-1} = j!`, the number of points of `D_j(Δ^(j-1))`.
    Factorial,
    /// `β_{j,j-1} = j! - 1`, the rank of reduced `H_0` of those points.
    FactorialMinusOne,
}

impl BaseConvention {
    fn value(self, j: i64) -> Integer {
        let f = factorial(j as u64);
        match self {
            BaseConvention::Factorial => f,
            BaseConvention::FactorialMinusOne => f - 1,
        }
    }
}

/// `β_{k,n} = -C(n, k-1) + Σ_{p=0}^{n-k+1} C(n+1, k+p-1) β_{k-1,k+p-2}`,
/// grounded at `β_{2,m} = 1` for `m >= 2` and at `β_{j,j-1}` per `base`.
pub fn betti_recurrence_with_base(k: i64, n: i64, base: BaseConvention) -> Result<Integer> {
    if k < 2 || k > n + 1 {
        return Err(Error::InvalidArgument(format!(
            "recurrence needs 2 <= k <= n + 1, got k={k} n={n}"
        )));
    }
    fn rec(k: i64, n: i64, base: BaseConvention) -> Integer {
        if n == k - 1 {
            return base.value(k);
        }
        if k == 2 {
            return Integer::one();
        }
        let mut sum = -binomial_or_zero(n, k - 1);
        for p in 0..=n - k + 1 {
            sum += binomial_or_zero(n + 1, k + p - 1) * rec(k - 1, k + p - 2, base);
        }
        sum
    }
    Ok(rec(k, n, base))
}

/// [`betti_recurrence_with_base`] with `β_{j,j-1} = j!`.
pub fn betti_recurrence(k: i64, n: i64) -> Result<Integer> {
    betti_recurrence_with_base(k, n, BaseConvention::Factorial)
}

/// `β_{k,n} = Y_{k,n} + Σ_{p=0}^{n-k} C(n+1, p+1) β_{k-1,n-p-1}` for
/// `3 <= k <= n`, with the inner Betti numbers from [`betti_closed`].
pub fn betti_via_y(k: i64, n: i64) -> Result<Integer> {
    let mut sum = y_rank(k, n)?;
    for p in 0..=n - k {
        sum += binomial(n + 1, p + 1)? * betti_closed(k - 1, n - p - 1)?;
    }
    Ok(sum)
}

/// Both recurrence conventions next to the closed form at one `(k, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConventionReport {
    pub k: i64,
    pub n: i64,
    pub closed: Integer,
    pub base_factorial: Integer,
    pub base_factorial_minus_one: Integer,
}

pub fn convention_report(k: i64, n: i64) -> Result<ConventionReport> {
    Ok(ConventionReport {
        k,
        n,
        closed: betti_closed(k, n)?,
        base_factorial: betti_recurrence_with_base(k, n, BaseConvention::Factorial)?,
        base_factorial_minus_one: betti_recurrence_with_base(k, n, BaseConvention::FactorialMinusOne)?,
    })
}

/// Checks that a homology result is that of a wedge of `betti` spheres of
/// dimension `top >= 1`: `Z` in degree 0, free of rank `betti` in degree
/// `top`, zero elsewhere.
pub fn check_wedge(h: &HomologyResult, top: usize, betti: &Integer) -> std::result::Result<(), String> {
    for deg in &h.degrees {
        let expected_rank: Integer = match deg.d {
            0 => Integer::one(),
            d if d == top => betti.clone(),
            _ => Integer::zero(),
        };
        if !deg.torsion.is_empty() {
            return Err(format!("torsion in degree {}: {:?}", deg.d, deg.torsion));
        }
        if Integer::from(deg.rank) != expected_rank {
            return Err(format!(
                "rank of H{} is {}, expected {}",
                deg.d, deg.rank, expected_rank
            ));
        }
    }
    if h.degrees.len() != top + 1 {
        return Err(format!("complex has dimension {}, expected {top}", h.degrees.len() as i64 - 1));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One `(k, n)` row of the verification table. Big numbers serialize as
/// decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiRow {
    pub k: i64,
    pub n: i64,
    #[serde(serialize_with = "ser_int")]
    pub betti_formula: Integer,
    #[serde(serialize_with = "ser_int")]
    pub betti_recurrence: Integer,
    #[serde(serialize_with = "ser_opt_int")]
    pub betti_homology: Option<Integer>,
    #[serde(serialize_with = "ser_int")]
    pub euler_cells: Integer,
    #[serde(serialize_with = "ser_int")]
    pub euler_formula: Integer,
    pub status: Status,
    #[serde(skip)]
    pub detail: Vec<String>,
}

fn ser_int<S: serde::Serializer>(v: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_opt_int<S: serde::Serializer>(v: &Option<Integer>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiTable {
    pub rows: Vec<BettiRow>,
}

pub const CSV_HEADER: &str =
    "k,n,betti_formula,betti_recurrence,betti_homology,euler_cells,euler_formula,status";

impl BettiTable {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BettiRow> {
        self.rows.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn get(&self, k: i64, n: i64) -> Option<&BettiRow> {
        self.rows.iter().find(|r| r.k == k && r.n == n)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.k,
                r.n,
                r.betti_formula,
                r.betti_recurrence,
                r.betti_homology.as_ref().map(ToString::to_string).unwrap_or_default(),
                r.euler_cells,
                r.euler_formula,
                status
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_n: i64,
    pub max_k: i64,
    pub with_homology: bool,
    /// Flip one boundary sign before computing homology. Exists so the
    /// failure path can be exercised end to end.
    pub corrupt_boundary: bool,
}

impl VerifyOptions {
    pub fn new(max_n: i64, max_k: i64, with_homology: bool) -> Self {
        VerifyOptions {
            max_n,
            max_k,
            with_homology,
            corrupt_boundary: false,
        }
    }
}

/// Flips the sign of the first entry of `∂_2`, or of `∂_1` when the complex
/// is a graph.
pub fn corrupt_boundaries(boundaries: &mut [SparseIntMatrix]) {
    let target = if boundaries.len() >= 2 { 1 } else { 0 };
    if let Some(m) = boundaries.get_mut(target) {
        let first = m.triplets().next().map(|(r, c, v)| (r, c, v.clone()));
        if let Some((r, c, v)) = first {
            m.set(r, c, -v);
        }
    }
}

fn homology_of_config(k: usize, n: u32, corrupt: bool) -> Result<(HomologyResult, Integer)> {
    let complex = ConfigComplex::build_ordered(&SimplicialComplex::full_simplex(n), k);
    let mut boundaries = complex.boundary_matrices();
    if corrupt {
        corrupt_boundaries(&mut boundaries);
    }
    let cx = ChainComplex::new(complex.f_vector(), boundaries)?;
    Ok((cx.homology(), complex.euler_characteristic()))
}

/// One table row. Never fails: problems are recorded as a failing status.
pub fn verify_row(k: i64, n: i64, with_homology: bool, corrupt: bool) -> BettiRow {
    let mut detail = Vec::new();
    let mut value = |r: Result<Integer>, what: &str| {
        r.unwrap_or_else(|e| {
            detail.push(format!("{what}: {e}"));
            Integer::zero()
        })
    };
    let betti_formula = value(betti_closed(k, n), "betti_formula");
    let betti_recurrence = value(betti_recurrence(k, n), "betti_recurrence");
    let euler_cells = value(euler_from_cells(k, n), "euler_cells");
    let euler_formula = value(euler_from_formula(k, n), "euler_formula");
    if betti_formula != betti_recurrence {
        detail.push(format!("recurrence gives {betti_recurrence}, closed form {betti_formula}"));
    }
    if euler_cells != euler_formula {
        detail.push(format!("cell-count Euler {euler_cells}, formula {euler_formula}"));
    }
    let mut betti_homology = None;
    if with_homology {
        let top = (n - k + 1) as usize;
        match homology_of_config(k as usize, n as u32, corrupt) {
            Ok((h, chi)) => {
                if chi != euler_cells {
                    detail.push(format!("alternating f-vector sum {chi}, formula {euler_cells}"));
                }
                if let Some(deg) = h.degree(top) {
                    betti_homology = Some(Integer::from(deg.rank));
                }
                if let Err(msg) = check_wedge(&h, top, &betti_formula) {
                    detail.push(msg);
                }
            }
            Err(e) => detail.push(format!("homology: {e}")),
        }
    }
    BettiRow {
        k,
        n,
        betti_formula,
        betti_recurrence,
        betti_homology,
        euler_cells,
        euler_formula,
        status: if detail.is_empty() { Status::Pass } else { Status::Fail },
        detail,
    }
}

/// Every `(k, n)` with `2 <= k <= min(n, max_k)` and `n <= max_n`, in order
/// of `n` then `k`. Rows are evaluated in parallel on the current rayon
/// pool and collected in order.
pub fn run_verification(opts: &VerifyOptions) -> BettiTable {
    let pairs: Vec<(i64, i64)> = (2..=opts.max_n)
        .flat_map(|n| (2..=n.min(opts.max_k)).map(move |k| (k, n)))
        .collect();
    let rows = pairs
        .into_par_iter()
        .map(|(k, n)| verify_row(k, n, opts.with_homology, opts.corrupt_boundary))
        .collect();
    BettiTable { rows }
}
