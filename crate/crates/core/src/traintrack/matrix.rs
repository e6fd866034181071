//! Transition matrices, primitivity and Perron–Frobenius data.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{RoseMap, TrainTrackError};
use crate::scalar::{factor, NumberField, Poly, Scalar};

/// Square matrix of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix(pub Vec<Vec<u64>>);

impl Matrix {
    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn identity(n: usize) -> Self {
        Matrix((0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.size();
        let mut out = vec![vec![0u64; n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..n).map(|k| self.0[i][k].saturating_mul(other.0[k][j])).fold(0u64, u64::saturating_add);
            }
        }
        Matrix(out)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().flatten().all(|&x| x > 0)
    }

    /// Largest row sum, an upper bound for the spectral radius.
    pub fn max_row_sum(&self) -> u64 {
        self.0.iter().map(|r| r.iter().sum()).max().unwrap_or(0)
    }

    pub fn trace(&self) -> u64 {
        (0..self.size()).map(|i| self.0[i][i]).sum()
    }

    /// `det(xI - M)`, by the Faddeev–LeVerrier recursion.
    pub fn characteristic_polynomial(&self) -> Poly {
        let n = self.size();
        let m: Vec<Vec<BigRational>> = self
            .0
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut mk: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
        for k in 1..=n {
            // M_k = M (M_{k-1} + c_{n-k+1} I)
            let mut a = mk.clone();
            for (i, row) in a.iter_mut().enumerate() {
                row[i] += &coeffs[n - k + 1];
            }
            mk = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).fold(BigRational::zero(), |acc, l| acc + &m[i][l] * &a[l][j]))
                        .collect()
                })
                .collect();
            let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + &mk[i][i]);
            coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
        }
        Poly::new(coeffs)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| format!("[{}]", r.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// `M[i][j]` counts the occurrences of generator `i` (either sign) in
/// `f(e_j)`, so columns are images and `M(f ∘ g) = M(f) M(g)`.
pub fn transition_matrix(m: &RoseMap) -> Matrix {
    let n = m.rank();
    let mut out = vec![vec![0u64; n]; n];
    for (j, img) in m.images.iter().enumerate() {
        for s in img {
            out[s.gen][j] += 1;
        }
    }
    Matrix(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotPrimitive {
    /// A proper nonempty set of generators closed under taking image letters.
    Reducible { subset: Vec<usize> },
    /// Irreducible but with period `period`; `classes` are the cyclic classes.
    Periodic { period: usize, classes: Vec<Vec<usize>> },
}

impl fmt::Display for NotPrimitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotPrimitive::Reducible { subset } => write!(f, "invariant subset {subset:?}"),
            NotPrimitive::Periodic { period, classes } => write!(f, "period {period}, classes {classes:?}"),
        }
    }
}

fn reachable(adj: &[Vec<usize>], start: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

/// Least `k <= (n-1)^2 + 1` with `M^k > 0`, or a witness of failure.
pub fn primitivity(mat: &Matrix) -> Result<usize, NotPrimitive> {
    let n = mat.size();
    let mut p = mat.clone();
    for k in 1..=(n.saturating_sub(1)).pow(2) + 1 {
        if p.is_positive() {
            return Ok(k);
        }
        p = p.mul(mat);
    }
    // j -> i when generator i occurs in f(e_j)
    let adj: Vec<Vec<usize>> = (0..n).map(|j| (0..n).filter(|&i| mat.0[i][j] > 0).collect()).collect();
    for s in 0..n {
        let r = reachable(&adj, s);
        if r.len() < n {
            return Err(NotPrimitive::Reducible {
                subset: r.into_iter().collect(),
            });
        }
    }
    // strongly connected: period = gcd of level differences along edges
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if level[w] == usize::MAX {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut period = 0usize;
    for v in 0..n {
        for &w in &adj[v] {
            let diff = (level[v] + 1).abs_diff(level[w]);
            period = period.gcd(&diff);
        }
    }
    let classes = (0..period)
        .map(|c| (0..n).filter(|&v| level[v] % period == c).collect())
        .collect();
    Err(NotPrimitive::Periodic { period, classes })
}

#[derive(Debug, Clone)]
pub struct TransitionData {
    pub matrix: Matrix,
    pub exponent: usize,
    pub characteristic: Poly,
    pub field: Arc<NumberField>,
    pub lambda: Scalar,
    /// Positive eigenvector normalised so that its last entry is 1.
    pub eigenvector: Vec<Scalar>,
}

impl TransitionData {
    /// `M v - λ v`, entrywise.
    pub fn residual(&self) -> Vec<Scalar> {
        let n = self.matrix.size();
        (0..n)
            .map(|i| {
                let mv: Scalar = (0..n)
                    .map(|j| Scalar::from_int(self.matrix.0[i][j] as i64) * &self.eigenvector[j])
                    .sum();
                mv - &self.lambda * &self.eigenvector[i]
            })
            .collect()
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Field generated by the largest real root of the characteristic
/// polynomial, defined by the irreducible factor vanishing there.
fn pf_field(mat: &Matrix) -> Result<(Poly, Arc<NumberField>), TrainTrackError> {
    let chi = mat.characteristic_polynomial();
    let sq = chi.squarefree();
    let mut lo = rat(1, 2);
    let mut hi = BigRational::from_integer(BigInt::from(mat.max_row_sum() + 1));
    if sq.count_roots(&lo, &hi) == 0 {
        return Err(TrainTrackError::Field("no real root above 1/2".into()));
    }
    // shrink to an interval holding only the largest root
    while sq.count_roots(&lo, &hi) > 1 {
        let mid = (&lo + &hi) / rat(2, 1);
        if sq.count_roots(&mid, &hi) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let factors = factor(&chi).ok_or_else(|| TrainTrackError::Field("factorisation limit exceeded".into()))?;
    let f = factors
        .into_iter()
        .find(|f| f.count_roots(&lo, &hi) == 1)
        .ok_or_else(|| TrainTrackError::Field("no factor vanishes at the root".into()))?;
    if f.degree() == Some(1) {
        let root = -f.coeff(0);
        lo = &root - rat(1, 2);
        hi = &root + rat(1, 2);
    }
    let field = NumberField::define_checked(f.clone(), lo, hi).map_err(|e| TrainTrackError::Field(e.to_string()))?;
    Ok((chi, field))
}

/// Null vector of `M - λI` with last entry 1.
fn eigenvector(mat: &Matrix, lambda: &Scalar) -> Result<Vec<Scalar>, TrainTrackError> {
    let n = mat.size();
    let mut a: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = Scalar::from_int(mat.0[i][j] as i64);
                    if i == j {
                        x - lambda
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Scalar::one() / &a[row][col];
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..n {
                    let d = &factor * &a[row][c];
                    a[r][c] = &a[r][c] - &d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return Err(TrainTrackError::Field(format!("eigenspace of dimension {}", free.len())));
    }
    let fc = free[0];
    let mut v = vec![Scalar::zero(); n];
    v[fc] = Scalar::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -&a[r][fc];
    }
    let last = v[n - 1].clone();
    if last.is_zero() {
        return Err(TrainTrackError::Field("eigenvector has zero last entry".into()));
    }
    Ok(v.iter().map(|x| x / &last).collect())
}

pub fn transition(m: &RoseMap) -> Result<TransitionData, TrainTrackError> {
    let matrix = transition_matrix(m);
    let exponent = primitivity(&matrix).map_err(TrainTrackError::NotPrimitive)?;
    let (characteristic, field) = pf_field(&matrix)?;
    let lambda = if field.degree() == 1 {
        Scalar::from_rational(-field.minimal_polynomial().coeff(0))
    } else {
        Scalar::generator(&field)
    };
    let eigenvector = eigenvector(&matrix, &lambda)?;
    Ok(TransitionData {
        matrix,
        exponent,
        characteristic,
        field,
        lambda,
        eigenvector,
    })
}
