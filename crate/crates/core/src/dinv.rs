//! Correction terms `d(V, c) = max_{κ ∈ c} (|κ|² + b) / 4`.
//!
//! Writing `κ = r + 2Qv`, we get `|κ|² = -X P X` with `P = -Q` and
//! `X = Q⁻¹r + 2v`. So the maximum is a closest-vector problem for the coset
//! `Q⁻¹r + 2Zᵇ`. Scaling by `D = |det Q|` keeps everything integral:
//! `u = D·X = y₀ + 2Dv` with `y₀ = sign(det)·adj·r`, and `|κ|² = -uᵀPu / D²`.
//!
//! The search is a depth-first Fincke–Pohst enumeration that fixes
//! coordinates from the last to the first. The real minimum over the free
//! leading block is `u_Kᵀ S u_K` for the Schur complement `S`. We never form
//! `S`: the bordered minors `G_k = M_k · S` are integral, so pruning is an
//! integer comparison against `M_k · best`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::goeritz::{GoeritzForm, Rational};
use crate::linalg::{bordered_minors, leading_minors, IntMatrix};
use crate::spinc::{CharVector, HElement, SpincClass, SpincSpace};

pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DinvError {
    #[error("{classes} Spin^c classes exceed the budget of {budget}")]
    BudgetExceeded { classes: u128, budget: u128 },
    #[error("radius {radius} is below the certified radius {certified}")]
    RadiusTooSmall { radius: i64, certified: i64 },
}

/// Maximum of `|κ|²` on a class and the lexicographically smallest `κ`
/// attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaMax {
    pub norm_sq: Rational,
    pub maximizer: CharVector,
}

/// Per-class search data shared by the enumerator and the oracle.
struct Coset {
    d: i128,
    p: IntMatrix,
    y0: Vec<i128>,
    seed: Vec<i64>,
}

impl Coset {
    fn new(f: &GoeritzForm, rep: &[i64]) -> Self {
        let d = f.det_abs();
        let sign = f.det().signum();
        let y0: Vec<i128> = (0..f.rank())
            .map(|i| sign * f.adjugate().row(i).iter().zip(rep).map(|(&a, &r)| a as i128 * r as i128).sum::<i128>())
            .collect();
        let seed = y0.iter().map(|&y| round_div(-y, 2 * d) as i64).collect();
        Self { d, p: f.matrix().neg(), y0, seed }
    }

    fn u_of(&self, v: &[i64]) -> Vec<i128> {
        self.y0.iter().zip(v).map(|(&y, &t)| y + 2 * self.d * t as i128).collect()
    }

    fn norm(&self, u: &[i128]) -> i128 {
        let b = u.len();
        let mut s = 0i128;
        for i in 0..b {
            for j in 0..b {
                s += self.p[(i, j)] as i128 * u[i] * u[j];
            }
        }
        s
    }
}

/// Nearest integer to `n / d` for `d > 0`, ties rounded up.
fn round_div(n: i128, d: i128) -> i128 {
    (2 * n + d).div_euclid(2 * d)
}

fn kappa_of(f: &GoeritzForm, rep: &[i64], v: &[i64]) -> Vec<i64> {
    let qv = f.q_of(v);
    rep.iter().zip(&qv).map(|(&r, &x)| r + 2 * x).collect()
}

struct Search<'a> {
    f: &'a GoeritzForm,
    rep: &'a [i64],
    coset: Coset,
    minors: Vec<i128>,
    bordered: Vec<Vec<Vec<i128>>>,
    u: Vec<i128>,
    v: Vec<i64>,
    best: i128,
    best_kappa: Vec<i64>,
}

impl Search<'_> {
    /// Fix coordinate `k`, with `k+1..b` already fixed.
    fn descend(&mut self, k: usize) {
        let g = &self.bordered[k];
        let n = g.len();
        // N_k(u) = g00 u0² + 2 beta u0 + gamma, where u0 = u[k]
        let g00 = g[0][0];
        let beta: i128 = (1..n).map(|j| g[0][j] * self.u[k + j]).sum();
        let mut gamma = 0i128;
        for i in 1..n {
            for j in 1..n {
                gamma += g[i][j] * self.u[k + i] * self.u[k + j];
            }
        }
        let bound = self.minors[k];
        let two_d = 2 * self.coset.d;
        let y = self.coset.y0[k];
        // real minimiser u0* = -beta / g00; t* = (u0* - y) / 2D
        let centre = round_div(-beta - y * g00, two_d * g00);
        for dir in [1i128, -1] {
            let mut t = if dir == 1 { centre } else { centre - 1 };
            loop {
                let u0 = y + two_d * t;
                let val = g00 * u0 * u0 + 2 * beta * u0 + gamma;
                if val > bound * self.best {
                    break;
                }
                self.u[k] = u0;
                self.v[k] = t as i64;
                if k == 0 {
                    self.leaf(val);
                } else {
                    self.descend(k - 1);
                }
                t += dir;
            }
        }
    }

    fn leaf(&mut self, val: i128) {
        if val > self.best {
            return;
        }
        let kappa = kappa_of(self.f, self.rep, &self.v);
        if val < self.best || kappa < self.best_kappa {
            self.best = val;
            self.best_kappa = kappa;
        }
    }
}

/// Exact maximum of `κ Q⁻¹ κᵀ` over the class of `c`.
pub fn max_kappa_norm_sq(f: &GoeritzForm, c: &SpincClass) -> KappaMax {
    let b = f.rank();
    let rep = c.representative.entries();
    if b == 0 {
        return KappaMax { norm_sq: Rational::from(0), maximizer: c.representative.clone() };
    }
    let coset = Coset::new(f, rep);
    let p = f.matrix().neg();
    let seed_u = coset.u_of(&coset.seed);
    let best = coset.norm(&seed_u);
    let best_kappa = kappa_of(f, rep, &coset.seed);
    let mut s = Search {
        f,
        rep,
        minors: leading_minors(&p),
        bordered: (0..b).map(|k| bordered_minors(&p, k)).collect(),
        u: vec![0; b],
        v: vec![0; b],
        best,
        best_kappa,
        coset,
    };
    s.descend(b - 1);
    let d = s.coset.d;
    KappaMax {
        norm_sq: Rational::new(-s.best, d * d),
        maximizer: CharVector::new(f, s.best_kappa).expect("κ + 2Qv stays characteristic"),
    }
}

pub fn d_from_norm(norm_sq: Rational, b: usize) -> Rational {
    (norm_sq + Rational::from(b as i128)) / Rational::from(4)
}

pub fn d_invariant(f: &GoeritzForm, c: &SpincClass) -> Rational {
    d_from_norm(max_kappa_norm_sq(f, c).norm_sq, f.rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DEntry {
    pub class_id: HElement,
    pub maximizer: CharVector,
    #[serde(with = "crate::ratio_str")]
    pub norm_sq: Rational,
    #[serde(with = "crate::ratio_str")]
    pub d: Rational,
}

/// `d` for every class, in the lexicographic order of class labels.
#[derive(Clone, Debug)]
pub struct DInvariantTable {
    pub b: usize,
    pub det: i128,
    pub space: SpincSpace,
    pub entries: Vec<DEntry>,
}

impl DInvariantTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, id: &HElement) -> &DEntry {
        &self.entries[self.space.group().index_of(id)]
    }

    pub fn d(&self, id: &HElement) -> Rational {
        self.entry(id).d
    }

    /// `d` of the class containing `κ`.
    pub fn d_of_kappa(&self, kappa: &CharVector) -> Rational {
        self.d(&self.space.class_of(kappa).class_id)
    }

    pub fn max_d(&self) -> Rational {
        self.entries.iter().map(|e| e.d).max().expect("at least one class")
    }

    pub fn min_d(&self) -> Rational {
        self.entries.iter().map(|e| e.d).min().expect("at least one class")
    }
}

pub fn d_table(f: &GoeritzForm, budget: u128) -> Result<DInvariantTable, DinvError> {
    let space = SpincSpace::new(f);
    let classes = space.class_count();
    if classes > budget {
        return Err(DinvError::BudgetExceeded { classes, budget });
    }
    let entries = space
        .enumerate_classes()
        .into_par_iter()
        .map(|c| {
            let m = max_kappa_norm_sq(f, &c);
            DEntry { class_id: c.class_id, maximizer: m.maximizer, d: d_from_norm(m.norm_sq, f.rank()), norm_sq: m.norm_sq }
        })
        .collect();
    Ok(DInvariantTable { b: f.rank(), det: f.det(), space, entries })
}

/// Lower bound for the least eigenvalue of `P = -Q`: the better of plain
/// Gershgorin on `P` and Gershgorin on `P⁻¹ = adj(P) / det(P)`.
pub fn eigenvalue_lower_bound(f: &GoeritzForm) -> Rational {
    let p = f.matrix().neg();
    let b = f.rank();
    let gersh = (0..b)
        .map(|i| p[(i, i)] as i128 - (0..b).filter(|&j| j != i).map(|j| (p[(i, j)] as i128).abs()).sum::<i128>())
        .min()
        .unwrap_or(0);
    let row_max = (0..b)
        .map(|i| f.adjugate().row(i).iter().map(|&a| (a as i128).abs()).sum::<i128>())
        .max()
        .unwrap_or(1);
    Rational::from(gersh).max(Rational::new(f.det_abs(), row_max))
}

/// Smallest integer `s ≥ 0` with `s² ≥ x`.
fn ceil_sqrt(x: Rational) -> i64 {
    if x <= Rational::from(0) {
        return 0;
    }
    let (p, q) = (*x.numer(), *x.denom());
    let mut s = ((p as f64 / q as f64).sqrt().floor() as i128).max(0);
    while s * s * q < p {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) * q >= p {
        s -= 1;
    }
    s as i64
}

/// Box radius around the rounded seed that contains every maximiser:
/// `ceil(sqrt(v₀/λ)) + 1`, with `v₀` the seed value of `X P X / 4`.
pub fn certified_radius(f: &GoeritzForm, c: &SpincClass) -> i64 {
    if f.rank() == 0 {
        return 0;
    }
    let coset = Coset::new(f, c.representative.entries());
    let n_seed = coset.norm(&coset.u_of(&coset.seed));
    let v0 = Rational::new(n_seed, 4 * coset.d * coset.d);
    ceil_sqrt(v0 / eigenvalue_lower_bound(f)) + 1
}

/// Maximum of `κ adj(Q) κᵀ / det Q` over `κ = r + 2Qv` with
/// `|v - seed|_∞ ≤ radius`, by exhaustive scan.
pub fn brute_force_max(f: &GoeritzForm, c: &SpincClass, radius: i64) -> Result<Rational, DinvError> {
    let certified = certified_radius(f, c);
    if radius < certified {
        return Err(DinvError::RadiusTooSmall { radius, certified });
    }
    let b = f.rank();
    let rep = c.representative.entries();
    if b == 0 {
        return Ok(Rational::from(0));
    }
    let seed = Coset::new(f, rep).seed;
    let mut offset = vec![-radius; b];
    let mut best: Option<i128> = None;
    let det = f.det();
    loop {
        let v: Vec<i64> = seed.iter().zip(&offset).map(|(&s, &o)| s + o).collect();
        let kappa = kappa_of(f, rep, &v);
        // det has sign (-1)^b; compare numerators after normalising the sign
        let num = f.adjugate().quadratic_form(&kappa) * det.signum();
        if best.is_none_or(|x| num > x) {
            best = Some(num);
        }
        let mut i = 0;
        loop {
            if i == b {
                return Ok(Rational::new(best.expect("nonempty box"), det.abs()));
            }
            offset[i] += 1;
            if offset[i] <= radius {
                break;
            }
            offset[i] = -radius;
            i += 1;
        }
    }
}
