//! Topological bounds read off the d-invariant table: Θ lower bounds,
//! nonorientable genus bounds, Z2-Thurston norms of the three nonzero classes
//! of a rank-two `H₂(Y; Z2)`, and the complexity bounds they feed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blackgraph::{braid_blocks, wheel_graph, BlackGraph, GraphError};
use crate::braidlang::{st_length_upper_bound, BraidWord, Family, FamilyKind};
use crate::dinv::{d_table, DInvariantTable, DinvError, DEFAULT_BUDGET};
use crate::goeritz::{goeritz_form, GoeritzForm, Rational};
use crate::spinc::{two_torsion_elements, HElement, SpincError};

/// Θ values are listed for every element only up to this group order.
pub const THETA_TABLE_LIMIT: u128 = 400;

#[derive(Error, Debug)]
pub enum BoundsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Dinv(#[from] DinvError),
    #[error(transparent)]
    Spinc(#[from] SpincError),
    #[error("expected exactly 3 genus bounds, got {0}")]
    WrongCount(usize),
}

/// `max_c d(c + α) - d(c)`, where `c + α` is the shift `c + 2[α]`.
pub fn theta_lower_bound(tbl: &DInvariantTable, alpha: &HElement) -> Rational {
    let h = tbl.space.group();
    tbl.entries
        .iter()
        .map(|e| tbl.d(&h.add(&e.class_id, alpha)) - e.d)
        .max()
        .expect("at least one class")
}

/// `2 · Θ(t)` for a nonzero 2-torsion `t`. The genus is an integer, so
/// callers may round up.
pub fn nonorientable_genus_bound(tbl: &DInvariantTable, t: &HElement) -> Result<Rational, SpincError> {
    let h = tbl.space.group();
    if !h.is_two_torsion(t) {
        return Err(SpincError::NotTwoTorsion(t.clone()));
    }
    if t.is_zero() {
        return Err(SpincError::ZeroElement);
    }
    Ok(Rational::from(2) * theta_lower_bound(tbl, t))
}

/// Outcome of testing `h_i + h_{i+1} >= h_{i+2} + 2` cyclically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TautConn {
    /// Every inequality holds; `h_i - 2` bounds the norm of class `i`.
    Holds {
        #[serde(with = "rational_triple")]
        lower: [Rational; 3],
    },
    /// The inequality `h_i + h_{i+1} >= h_{i+2} + 2` fails for this `i`.
    Fails {
        index: usize,
        #[serde(with = "crate::ratio_str")]
        lhs: Rational,
        #[serde(with = "crate::ratio_str")]
        rhs: Rational,
    },
}

mod rational_triple {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &[Rational; 3], s: S) -> Result<S::Ok, S::Error> {
        r.iter().map(crate::ratio_str::format).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Rational; 3], D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let parsed: Option<Vec<Rational>> = v.iter().map(|s| crate::ratio_str::parse(s)).collect();
        parsed
            .and_then(|p| p.try_into().ok())
            .ok_or_else(|| D::Error::custom("expected three rationals"))
    }
}

pub fn taut_conn_norm_bounds(h: &[Rational]) -> Result<TautConn, BoundsError> {
    let h: [Rational; 3] = h.try_into().map_err(|_| BoundsError::WrongCount(h.len()))?;
    let two = Rational::from(2);
    for i in 0..3 {
        let lhs = h[i] + h[(i + 1) % 3];
        let rhs = h[(i + 2) % 3] + two;
        if lhs < rhs {
            return Ok(TautConn::Fails { index: i, lhs, rhs });
        }
    }
    Ok(TautConn::Holds { lower: h.map(|x| x - two) })
}

/// `χ₋` of the lifted spanning disks, an upper bound for the three norms.
pub fn family_norm_upper(family: &Family) -> [u64; 3] {
    match family {
        Family::Even(a) => {
            let n = a.len() as i64 / 2;
            let odd: i64 = a.iter().step_by(2).map(|&x| x as i64).sum();
            let even: i64 = a.iter().skip(1).step_by(2).map(|&x| x as i64).sum();
            [odd + n - 2, even + n - 2, odd + even - 2].map(|x| x.max(0) as u64)
        }
        Family::Odd([a, b, c]) => {
            let (a, b, c) = (*a as u64, *b as u64, *c as u64);
            [a + b, b + c, c + a]
        }
    }
}

/// `2 + Σ ‖A‖` over the nonzero classes of a rank-two subgroup.
pub fn jrt_complexity_lower(norms: [u64; 3]) -> u64 {
    2 + norms.iter().sum::<u64>()
}

/// The three designated 2-torsion covectors of a family, in the order that
/// matches [`family_norm_upper`].
pub fn family_torsion_covectors(f: &GoeritzForm, family: &Family) -> [Vec<i64>; 3] {
    let b = f.rank();
    let half = |x: Vec<i64>| -> Vec<i64> {
        f.q_of(&x)
            .into_iter()
            .map(|y| {
                debug_assert!(y % 2 == 0);
                y / 2
            })
            .collect()
    };
    match family {
        Family::Even(_) => {
            let odd: Vec<i64> = (0..b).map(|i| i64::from(i % 2 == 0)).collect();
            let even: Vec<i64> = (0..b).map(|i| i64::from(i % 2 == 1)).collect();
            [half(odd), half(even), half(vec![1; b])]
        }
        Family::Odd(_) => [half(vec![1, -1, 0]), half(vec![0, 1, -1]), half(vec![-1, 0, 1])],
    }
}

/// `κ₀` of a family: zero for the even family, `(1, -1, 1)` for the odd one.
pub fn family_base_kappa(family: &Family) -> Vec<i64> {
    match family {
        Family::Even(a) => vec![0; a.len()],
        Family::Odd(_) => vec![1, -1, 1],
    }
}

/// The named characteristic vectors of a family with their labels: `κ₀..κ₃`
/// for the even family, `κ₀` and `κ₁ = κ₀ + q(e₁ - e₂)` for the odd one.
pub fn family_designated_kappas(f: &GoeritzForm, family: &Family) -> Vec<(String, Vec<i64>)> {
    let k0 = family_base_kappa(family);
    let alphas = family_torsion_covectors(f, family);
    let count = match family {
        Family::Even(_) => 3,
        Family::Odd(_) => 1,
    };
    let mut out = vec![("kappa0".to_string(), k0.clone())];
    for (i, a) in alphas.iter().take(count).enumerate() {
        out.push((format!("kappa{}", i + 1), k0.iter().zip(a).map(|(&k, &x)| k + 2 * x).collect()));
    }
    out
}

/// For the odd family, the base vector paired with the `i`-th designated
/// class: `κ₀` with its `-1` moved to the second index of the pair.
pub fn odd_pair_base(i: usize) -> Vec<i64> {
    let mut k = vec![1; 3];
    k[(i + 1) % 3] = -1;
    k
}

#[derive(Clone, Debug)]
pub enum Input {
    Braid(BraidWord),
    Family(Family),
    Graph(BlackGraph),
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub budget: u128,
    pub k_max: u32,
}

impl Default for Options {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, k_max: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaBound {
    pub element: HElement,
    #[serde(with = "crate::ratio_str")]
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusBound {
    pub element: HElement,
    /// Covector of the designated 2-torsion class, for family inputs.
    pub covector: Option<Vec<i64>>,
    #[serde(with = "crate::ratio_str")]
    pub bound: Rational,
    /// `ceil(bound)`: genera are integers.
    pub genus_at_least: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormBound {
    pub lower: Option<u64>,
    pub upper: Option<u64>,
    pub exact: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Complexity {
    pub lower: Option<u64>,
    pub upper: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// Rank of the 2-torsion of `H`.
    pub two_rank: usize,
    /// Θ bounds for every element of `H`, omitted for large groups.
    pub theta: Option<Vec<ThetaBound>>,
    pub genus: Vec<GenusBound>,
    pub connectedness: Option<TautConn>,
    pub norms: Option<Vec<NormBound>>,
    pub complexity: Complexity,
    pub flags: Vec<String>,
}

/// Everything computed for one input.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub graph: BlackGraph,
    pub braid: Option<BraidWord>,
    pub family: Option<Family>,
    pub form: GoeritzForm,
    pub table: DInvariantTable,
    pub report: BoundsReport,
}

fn ceil(r: Rational) -> i64 {
    r.ceil().to_integer() as i64
}

pub fn analyze(input: &Input, opts: Options) -> Result<Analysis, BoundsError> {
    let (graph, braid, family) = match input {
        Input::Family(fam) => (wheel_graph(&fam.blocks())?, Some(fam.braid()), Some(fam.clone())),
        Input::Braid(w) => {
            let blocks = braid_blocks(w)?;
            (wheel_graph(&blocks)?, Some(w.clone()), Family::from_blocks(&blocks))
        }
        Input::Graph(g) => (g.clone(), None, None),
    };
    let form = goeritz_form(&graph);
    let table = d_table(&form, opts.budget)?;
    let group = table.space.group();

    let theta = (group.order() <= THETA_TABLE_LIMIT).then(|| {
        group.elements().map(|a| ThetaBound { bound: theta_lower_bound(&table, &a), element: a }).collect()
    });

    let torsion: Vec<HElement> = two_torsion_elements(group).into_iter().filter(|t| !t.is_zero()).collect();
    // 2^rank elements, zero included
    let two_rank = (torsion.len() + 1).trailing_zeros() as usize;

    let designated: Vec<(HElement, Option<Vec<i64>>)> = match &family {
        Some(fam) => family_torsion_covectors(&form, fam)
            .into_iter()
            .map(|c| (group.reduce(&c), Some(c)))
            .collect(),
        None => torsion.iter().map(|t| (t.clone(), None)).collect(),
    };
    let mut genus = Vec::with_capacity(designated.len());
    for (element, covector) in designated {
        let bound = nonorientable_genus_bound(&table, &element)?;
        genus.push(GenusBound { element, covector, bound, genus_at_least: ceil(bound) });
    }

    let mut flags = vec![
        "genus bounds are unconditional".to_string(),
        "surjectivity of H1(S;Z2) -> H1(Y;Z2) is assumed, not verified".to_string(),
    ];
    let upper = family.as_ref().map(family_norm_upper);
    let mut connectedness = None;
    let mut norms = None;
    let mut complexity = Complexity { lower: None, upper: None };
    if two_rank == 2 {
        let h: Vec<Rational> = genus.iter().map(|g| Rational::from(g.genus_at_least as i128)).collect();
        let outcome = taut_conn_norm_bounds(&h)?;
        let lower: Option<[u64; 3]> = match &outcome {
            TautConn::Holds { lower } => Some(lower.map(|x| x.to_integer().max(0) as u64)),
            TautConn::Fails { index, .. } => {
                flags.push(format!("connectedness inequality {index} fails; no norm lower bounds"));
                None
            }
        };
        norms = Some(
            (0..3)
                .map(|i| {
                    let lo = lower.map(|l| l[i]);
                    let up = upper.map(|u| u[i]);
                    let exact = match (lo, up) {
                        (Some(l), Some(u)) if l == u => Some(l),
                        _ => None,
                    };
                    NormBound { lower: lo, upper: up, exact }
                })
                .collect(),
        );
        if let Some(l) = lower {
            complexity.lower = Some(jrt_complexity_lower(l));
            flags.push("complexity lower bound assumes Y irreducible and atoroidal".to_string());
        }
        connectedness = Some(outcome);
    } else {
        flags.push(format!("2-torsion rank is {two_rank}, not 2; no norm or complexity claims"));
    }
    if let Some(w) = &braid {
        complexity.upper = Some(st_length_upper_bound(w, opts.k_max).length as u64);
        flags.push("complexity upper bound is the length of an explicit layered triangulation".to_string());
    }
    let report = BoundsReport { two_rank, theta, genus, connectedness, norms, complexity, flags };
    Ok(Analysis { graph, braid, family, form, table, report })
}

pub fn bounds_report(input: &Input, opts: Options) -> Result<BoundsReport, BoundsError> {
    Ok(analyze(input, opts)?.report)
}

/// Closed-form complexity interval of a family.
pub fn family_complexity_interval(family: &Family) -> (u64, u64) {
    let p = family.params();
    let s: u64 = p.iter().map(|&x| x as u64).sum();
    match family.kind() {
        FamilyKind::Even => {
            let n = p.len() as u64 / 2;
            ((2 * n + 2 * s).saturating_sub(4), 4 * n + 2 * s)
        }
        FamilyKind::Odd => (2 * s + 2, 2 * s + 9),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dinv::DEFAULT_BUDGET;
    use crate::goeritz::GoeritzForm;

    fn r(n: i128) -> Rational {
        Rational::from(n)
    }

    fn fam(kind: FamilyKind, p: &[i64]) -> Family {
        Family::new(kind, p).unwrap()
    }

    #[test]
    fn lemma_outcomes() {
        assert_eq!(taut_conn_norm_bounds(&[r(2), r(3), r(3)]).unwrap(), TautConn::Holds { lower: [r(0), r(1), r(1)] });
        assert_eq!(taut_conn_norm_bounds(&[r(2), r(2), r(2)]).unwrap(), TautConn::Holds { lower: [r(0), r(0), r(0)] });
        assert_eq!(
            taut_conn_norm_bounds(&[r(1), r(1), r(4)]).unwrap(),
            TautConn::Fails { index: 0, lhs: r(2), rhs: r(6) }
        );
        assert!(matches!(taut_conn_norm_bounds(&[r(1)]), Err(BoundsError::WrongCount(1))));
    }

    #[test]
    fn family_uppers() {
        assert_eq!(family_norm_upper(&fam(FamilyKind::Even, &[1, 2])), [0, 1, 1]);
        assert_eq!(family_norm_upper(&fam(FamilyKind::Even, &[1, 1, 1, 1])), [2, 2, 2]);
        assert_eq!(family_norm_upper(&fam(FamilyKind::Odd, &[1, 1, 1])), [2, 2, 2]);
        assert_eq!(family_norm_upper(&fam(FamilyKind::Even, &[1, 1])), [0, 0, 0]);
    }

    #[test]
    fn jrt_values() {
        assert_eq!(jrt_complexity_lower([0, 1, 1]), 4);
        assert_eq!(jrt_complexity_lower([2, 2, 2]), 8);
        assert_eq!(jrt_complexity_lower([0, 0, 0]), 2);
    }

    #[test]
    fn case_one_theta_and_genus() {
        let f = GoeritzForm::from_rows(&[[-4, 2], [2, -6]]).unwrap();
        let t = d_table(&f, DEFAULT_BUDGET).unwrap();
        let h = t.space.group();
        assert_eq!(theta_lower_bound(&t, &h.zero()), r(0));
        // (κ₁ - κ₀)/2 = q(e₁)/2 = (-2, 1)
        assert_eq!(theta_lower_bound(&t, &h.reduce(&[-2, 1])), r(1));
        let bounds: Vec<Rational> = two_torsion_elements(h)
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| nonorientable_genus_bound(&t, x).unwrap())
            .collect();
        let mut sorted = bounds.clone();
        sorted.sort();
        assert_eq!(sorted, vec![r(2), r(3), r(3)]);
        assert!(matches!(nonorientable_genus_bound(&t, &h.zero()), Err(SpincError::ZeroElement)));
        assert!(matches!(nonorientable_genus_bound(&t, &h.reduce(&[1, 0])), Err(SpincError::NotTwoTorsion(_))));
    }

    #[test]
    fn case_one_report() {
        let rep = bounds_report(&Input::Family(fam(FamilyKind::Even, &[1, 2])), Options::default()).unwrap();
        let g: Vec<i64> = rep.genus.iter().map(|g| g.genus_at_least).collect();
        assert_eq!(g, vec![2, 3, 3]);
        let exact: Vec<Option<u64>> = rep.norms.unwrap().iter().map(|n| n.exact).collect();
        assert_eq!(exact, vec![Some(0), Some(1), Some(1)]);
        assert_eq!(rep.complexity, Complexity { lower: Some(4), upper: Some(10) });
        assert_eq!(rep.two_rank, 2);
    }

    #[test]
    fn odd_family_report() {
        let rep = bounds_report(&Input::Family(fam(FamilyKind::Odd, &[1, 1, 1])), Options::default()).unwrap();
        let g: Vec<i64> = rep.genus.iter().map(|g| g.genus_at_least).collect();
        assert_eq!(g, vec![4, 4, 4]);
        assert!(rep.norms.unwrap().iter().all(|n| n.exact == Some(2)));
        assert_eq!(rep.complexity, Complexity { lower: Some(8), upper: Some(15) });
    }

    #[test]
    fn rp3_report() {
        let g = BlackGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let rep = bounds_report(&Input::Graph(g), Options::default()).unwrap();
        assert_eq!(rep.genus.len(), 1);
        assert_eq!(rep.genus[0].bound, r(1));
        assert_eq!(rep.two_rank, 1);
        assert!(rep.norms.is_none());
        assert_eq!(rep.complexity, Complexity { lower: None, upper: None });
    }

    #[test]
    fn theta_is_symmetric() {
        let f = GoeritzForm::from_rows(&[[-5, 1, 1], [1, -3, 1], [1, 1, -3]]).unwrap();
        let t = d_table(&f, DEFAULT_BUDGET).unwrap();
        let h = t.space.group();
        for a in h.elements() {
            let th = theta_lower_bound(&t, &a);
            assert!(th >= r(0));
            assert_eq!(th, theta_lower_bound(&t, &h.neg(&a)));
        }
    }

    #[test]
    fn closed_form_intervals() {
        assert_eq!(family_complexity_interval(&fam(FamilyKind::Even, &[1, 2])), (4, 10));
        assert_eq!(family_complexity_interval(&fam(FamilyKind::Even, &[1, 1, 1, 1])), (8, 16));
        assert_eq!(family_complexity_interval(&fam(FamilyKind::Odd, &[0, 0, 0])), (2, 9));
    }
}
