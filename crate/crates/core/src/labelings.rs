//! Prime labelings: the verifier and one constructive labeler per family.
//!
//! Every clump-structured labeler hands clump `i` one consecutive block of
//! labels and puts a label on the cycle vertex that is coprime to the rest of
//! its block and to the neighboring cycle labels.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build, FamilySpec, Graph, GraphError, VertexRole};
use crate::numth::{gcd_unchecked, largest_prime_in_range, NumthError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("labeling has {labels} entries but the graph has {vertices} vertices")]
    LengthMismatch { labels: usize, vertices: usize },
    #[error("graph carries no vertex roles; formula labelers need a constructed graph")]
    MissingRoles,
    #[error("graph roles do not match the {0} construction")]
    RoleMismatch(&'static str),
    #[error("no constructive labeling for {0}")]
    NoScheme(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Numth(#[from] NumthError),
}

/// Vertex id → label. Not required to be a bijection; [`verify`] reports
/// whether it is.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Labeling(Vec<u64>);

impl Labeling {
    pub fn new(labels: Vec<u64>) -> Self {
        Labeling(labels)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn label(&self, v: usize) -> Option<u64> {
        self.0.get(v).copied()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    /// True iff the labels are exactly `{1, .., len}`.
    pub fn is_bijection(&self) -> bool {
        let n = self.0.len();
        let mut seen = vec![false; n + 1];
        for &x in &self.0 {
            if x == 0 || x > n as u64 || seen[x as usize] {
                return false;
            }
            seen[x as usize] = true;
        }
        true
    }
}

/// An edge whose endpoint labels share a factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    pub lu: u64,
    pub lv: u64,
    pub gcd: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub bijection_ok: bool,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn is_prime_labeling(&self) -> bool {
        self.bijection_ok && self.violations.is_empty()
    }
}

/// Checks that `labeling` is a bijection onto `{1..n}` and lists every edge
/// whose endpoint labels are not relatively prime.
pub fn verify(g: &Graph, labeling: &Labeling) -> Result<VerifyReport, LabelError> {
    if labeling.len() != g.n() {
        return Err(LabelError::LengthMismatch {
            labels: labeling.len(),
            vertices: g.n(),
        });
    }
    let labels = labeling.as_slice();
    let violations = g
        .edges()
        .iter()
        .filter_map(|&(u, v)| {
            let (lu, lv) = (labels[u], labels[v]);
            // gcd(0, 0) = 0 is reported as a violation too
            let d = gcd_unchecked(lu, lv);
            (d != 1).then_some(Violation { u, v, lu, lv, gcd: d })
        })
        .collect();
    Ok(VerifyReport {
        bijection_ok: labeling.is_bijection(),
        violations,
    })
}

/// `P_n` labeled `1..n` along the path.
pub fn label_path(n: usize) -> Labeling {
    Labeling((1..=n as u64).collect())
}

/// `C_n` labeled `1..n` around the cycle, so 1 and n are adjacent.
pub fn label_cycle(n: usize) -> Labeling {
    Labeling((1..=n as u64).collect())
}

/// `S_n`: center 1, leaves `2..=n+1` ascending.
pub fn label_star(n: usize) -> Labeling {
    Labeling((1..=n as u64 + 1).collect())
}

/// Applies `f` to every vertex role of a constructed graph.
///
/// `f` must return `None` for roles that do not belong to the construction; `expected_len` gives the vertex count the
/// construction has for that cycle length. Distinct roles plus matching counts
/// mean the role set is exactly the construction's.
fn by_role(
    g: &Graph,
    family: &'static str,
    expected_len: impl Fn(usize) -> usize,
    f: impl Fn(VertexRole) -> Option<u64>,
) -> Result<Labeling, LabelError> {
    let roles = g.roles().ok_or(LabelError::MissingRoles)?;
    let n = roles.iter().filter(|r| matches!(r, VertexRole::Cycle(_))).count();
    if n < 3 || g.n() != expected_len(n) {
        return Err(LabelError::RoleMismatch(family));
    }
    roles
        .iter()
        .map(|&r| {
            let i = r.clump();
            if !(1..=n).contains(&i) {
                return None;
            }
            f(r)
        })
        .collect::<Option<Vec<_>>>()
        .map(Labeling)
        .ok_or(LabelError::RoleMismatch(family))
}

fn in_range(x: usize, hi: usize) -> bool {
    (1..=hi).contains(&x)
}

/// `j`-th smallest element (1-based) of `block_start..block_start+len` once
/// `taken` is removed.
fn nth_remaining(block_start: u64, taken: u64, j: usize) -> u64 {
    let candidate = block_start + j as u64 - 1;
    if candidate >= taken {
        candidate + 1
    } else {
        candidate
    }
}

/// `C_n ⋆ S_3`.
pub fn label_hairy3(g: &Graph) -> Result<Labeling, LabelError> {
    by_role(g, "C_n*S_3", |n| 4 * n, |r| {
        Some(match r {
            VertexRole::Cycle(1) => 1,
            VertexRole::Cycle(i) => 4 * i as u64 - 1,
            VertexRole::Pendant(1, j) if in_range(j, 3) => j as u64 + 1,
            VertexRole::Pendant(i, j) => {
                let i = i as u64;
                match j {
                    1 => 4 * i - 3,
                    2 => 4 * i - 2,
                    3 => 4 * i,
                    _ => return None,
                }
            }
            _ => return None,
        })
    })
}

/// `C_n ⋆ S_5`.
pub fn label_hairy5(g: &Graph) -> Result<Labeling, LabelError> {
    by_role(g, "C_n*S_5", |n| 6 * n, |r| {
        Some(match r {
            VertexRole::Cycle(1) => 1,
            VertexRole::Cycle(i) => 6 * (i as u64 - 1) + 5,
            VertexRole::Pendant(1, j) if in_range(j, 5) => j as u64 + 1,
            VertexRole::Pendant(i, j) if in_range(j, 4) => 6 * (i as u64 - 1) + j as u64,
            VertexRole::Pendant(i, 5) => 6 * (i as u64 - 1) + 6,
            _ => return None,
        })
    })
}

/// Cycle label of clump `i >= 2` in `C_n ⋆ S_7`: the second, third or fourth
/// odd number of the block, picked by `i mod 15` to dodge multiples of 3 and 5.
pub fn hairy7_cycle_label(i: usize) -> u64 {
    let base = 8 * i as u64;
    match i % 15 {
        2 | 3 | 6 | 8 | 9 | 11 | 12 | 14 => base - 5,
        4 | 5 | 7 | 10 | 13 => base - 3,
        _ => base - 1,
    }
}

/// `C_n ⋆ S_7`. Pendants take the rest of the block in ascending order.
pub fn label_hairy7(g: &Graph) -> Result<Labeling, LabelError> {
    let cycle_label = |i: usize| if i == 1 { 1 } else { hairy7_cycle_label(i) };
    by_role(g, "C_n*S_7", |n| 8 * n, |r| {
        Some(match r {
            VertexRole::Cycle(i) => cycle_label(i),
            VertexRole::Pendant(i, j) if in_range(j, 7) => {
                nth_remaining(8 * i as u64 - 7, cycle_label(i), j)
            }
            _ => return None,
        })
    })
}

/// Block `{2^i - 1, .., 2^(i+1) - 2}` of Bertrand weed clump `i`.
pub fn weed_block(i: usize) -> RangeInclusive<u64> {
    ((1u64 << i) - 1)..=((1u64 << (i + 1)) - 2)
}

/// Cycle label of Bertrand weed clump `i`: 1 for the first clump, otherwise the
/// largest prime in the block.
pub fn weed_cycle_label(i: usize) -> Result<u64, LabelError> {
    if i == 1 {
        return Ok(1);
    }
    let block = weed_block(i);
    largest_prime_in_range(*block.start(), *block.end())?
        .ok_or_else(|| LabelError::NoScheme(format!("no prime in Bertrand block {i}")))
}

/// `BW_n`. Pendants take the rest of each block in ascending order.
pub fn label_bertrand_weed(g: &Graph) -> Result<Labeling, LabelError> {
    let roles = g.roles().ok_or(LabelError::MissingRoles)?;
    let n = roles.iter().filter(|r| matches!(r, VertexRole::Cycle(_))).count();
    if n > crate::graph::MAX_WEED_CYCLE {
        return Err(LabelError::RoleMismatch("BW_n"));
    }
    let primes = (1..=n).map(weed_cycle_label).collect::<Result<Vec<_>, _>>()?;
    by_role(g, "BW_n", |n| (1usize << (n + 1)) - 2, |r| {
        Some(match r {
            VertexRole::Cycle(i) => primes[i - 1],
            VertexRole::Pendant(i, j) if in_range(j, (1 << i) - 1) => {
                nth_remaining(*weed_block(i).start(), primes[i - 1], j)
            }
            _ => return None,
        })
    })
}

/// `C_n ⋆ P_2 ⋆ S_3`.
///
/// For `i ≡ 0 (mod 6)` the pendant takes `5i - 1` and the stars take
/// `{5i - 3, 5i - 2, 5i}` so that the clump still uses its whole block.
pub fn label_cps1(g: &Graph) -> Result<Labeling, LabelError> {
    by_role(g, "C_n*P_2*S_3", |n| 5 * n, |r| {
        let i = r.clump() as u64;
        let odd = i % 2 == 1;
        Some(match r {
            VertexRole::Cycle(_) => 5 * i - 4,
            VertexRole::Pendant(_, 1) if odd => 5 * i - 2,
            VertexRole::Pendant(_, 1) if i.is_multiple_of(6) => 5 * i - 1,
            VertexRole::Pendant(_, 1) => 5 * i - 3,
            VertexRole::Star(_, j) if in_range(j, 3) => {
                let j = j as u64;
                if odd {
                    if j == 3 {
                        5 * i - 3
                    } else {
                        5 * i - 2 + j
                    }
                } else if i.is_multiple_of(6) {
                    [5 * i - 3, 5 * i - 2, 5 * i][j as usize - 1]
                } else {
                    5 * i - 3 + j
                }
            }
            _ => return None,
        })
    })
}

/// Offsets `d` (label = 14i - d) for stars `s_{i,1..3}` and leaves
/// `l_{i,j,k}` in `(j, k)` order, for `i ≡ 1, 2 (mod 3)`.
const CPS2_STARS_A: [u64; 3] = [9, 5, 3];
const CPS2_LEAVES_A: [[u64; 3]; 3] = [[11, 10, 8], [7, 6, 4], [2, 1, 0]];
/// Same for `i ≡ 0 (mod 3)`.
const CPS2_STARS_B: [u64; 3] = [11, 7, 1];
const CPS2_LEAVES_B: [[u64; 3]; 3] = [[12, 9, 8], [6, 5, 4], [3, 2, 0]];

/// `C_n ⋆ P_2 ⋆ S_3 ⋆ S_3`.
pub fn label_cps2(g: &Graph) -> Result<Labeling, LabelError> {
    by_role(g, "C_n*P_2*S_3*S_3", |n| 14 * n, |r| {
        let i = r.clump() as u64;
        let top = 14 * i;
        let (stars, leaves) = if i.is_multiple_of(3) {
            (&CPS2_STARS_B, &CPS2_LEAVES_B)
        } else {
            (&CPS2_STARS_A, &CPS2_LEAVES_A)
        };
        Some(match r {
            VertexRole::Cycle(_) => top - 13,
            VertexRole::Pendant(_, 1) => {
                if i.is_multiple_of(3) {
                    top - 10
                } else {
                    top - 12
                }
            }
            VertexRole::Star(_, j) if in_range(j, 3) => top - stars[j - 1],
            VertexRole::Leaf(_, j, k) if in_range(j, 3) && in_range(k, 3) => top - leaves[j - 1][k - 1],
            _ => return None,
        })
    })
}

/// Which constructive labeler applies to a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Path,
    Cycle,
    Star,
    Hairy3,
    Hairy5,
    Hairy7,
    BertrandWeed,
    Cps1,
    Cps2,
}

impl Scheme {
    pub fn for_family(spec: &FamilySpec) -> Result<Scheme, LabelError> {
        Ok(match *spec {
            FamilySpec::Path { .. } => Scheme::Path,
            FamilySpec::Cycle { .. } => Scheme::Cycle,
            FamilySpec::Star { .. } => Scheme::Star,
            FamilySpec::HairyCycle { m: 3, .. } => Scheme::Hairy3,
            FamilySpec::HairyCycle { m: 5, .. } => Scheme::Hairy5,
            FamilySpec::HairyCycle { m: 7, .. } => Scheme::Hairy7,
            FamilySpec::BertrandWeed { .. } => Scheme::BertrandWeed,
            FamilySpec::CyclePendantStar { levels: 1, .. } => Scheme::Cps1,
            FamilySpec::CyclePendantStar { levels: 2, .. } => Scheme::Cps2,
            FamilySpec::HairyCycle { m, .. } => {
                return Err(LabelError::NoScheme(format!(
                    "hairy cycles with m = {m} (only m = 3, 5, 7); use the solver"
                )))
            }
            FamilySpec::CyclePath { .. } => {
                return Err(LabelError::NoScheme("cycle-path graphs; use the solver".to_string()))
            }
            FamilySpec::CyclePendantStar { levels, .. } => {
                return Err(LabelError::NoScheme(format!("ternary trees with {levels} levels")))
            }
        })
    }

    pub fn apply(&self, g: &Graph) -> Result<Labeling, LabelError> {
        match self {
            Scheme::Path => Ok(label_path(g.n())),
            Scheme::Cycle => Ok(label_cycle(g.n())),
            Scheme::Star => Ok(label_star(g.n().saturating_sub(1))),
            Scheme::Hairy3 => label_hairy3(g),
            Scheme::Hairy5 => label_hairy5(g),
            Scheme::Hairy7 => label_hairy7(g),
            Scheme::BertrandWeed => label_bertrand_weed(g),
            Scheme::Cps1 => label_cps1(g),
            Scheme::Cps2 => label_cps2(g),
        }
    }
}

/// Builds the family graph and its constructive labeling.
pub fn label_family(spec: &FamilySpec) -> Result<(Graph, Labeling), LabelError> {
    let scheme = Scheme::for_family(spec)?;
    let g = build(spec)?;
    let l = scheme.apply(&g)?;
    Ok((g, l))
}

/// Recovers the family a graph was built from: the candidate suggested by its
/// roles (or, without roles, a path or star) is rebuilt and compared exactly.
pub fn infer_family(g: &Graph) -> Option<FamilySpec> {
    let candidate = match g.roles() {
        None => {
            let n = g.n();
            return [FamilySpec::Path { n }, FamilySpec::Star { n: n.checked_sub(1)? }]
                .into_iter()
                .find(|spec| build(spec).is_ok_and(|b| b == *g));
        }
        Some(roles) => {
            let n = roles.iter().filter(|r| matches!(r, VertexRole::Cycle(_))).count();
            if n == 0 {
                return None;
            }
            let count = |pred: fn(&VertexRole) -> bool| roles.iter().filter(|r| pred(r)).count();
            let pendants = count(|r| matches!(r, VertexRole::Pendant(..)));
            let stars = count(|r| matches!(r, VertexRole::Star(..)));
            let leaves = count(|r| matches!(r, VertexRole::Leaf(..)));
            if stars > 0 {
                FamilySpec::CyclePendantStar {
                    n,
                    levels: if leaves > 0 { 2 } else { 1 },
                }
            } else if pendants == 0 {
                FamilySpec::Cycle { n }
            } else if (1..=n).all(|i| roles.contains(&VertexRole::Pendant(i, pendants / n)))
                && pendants % n == 0
            {
                let m = pendants / n;
                let chained = g.edges().iter().any(|&(u, v)| {
                    matches!(
                        (g.role(u), g.role(v)),
                        (Some(VertexRole::Pendant(..)), Some(VertexRole::Pendant(..)))
                    )
                });
                if chained {
                    FamilySpec::CyclePath { n, m }
                } else {
                    FamilySpec::HairyCycle { n, m }
                }
            } else {
                FamilySpec::BertrandWeed { n }
            }
        }
    };
    build(&candidate).is_ok_and(|b| b == *g).then_some(candidate)
}

/// Labels a constructed graph with the scheme of the family it came from.
pub fn label_graph(g: &Graph) -> Result<Labeling, LabelError> {
    let spec = infer_family(g).ok_or(LabelError::NoScheme(
        "a graph that matches none of the constructed families".to_string(),
    ))?;
    Scheme::for_family(&spec)?.apply(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyFailure {
    pub n: usize,
    pub reason: String,
}

/// Outcome of running a labeler and the verifier over a range of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub passes: usize,
    pub failures: Vec<FamilyFailure>,
}

impl FamilyReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the constructive labeler of `template`'s family for every `n` in
/// `ns` and verifies each result.
pub fn check_family(template: &FamilySpec, ns: RangeInclusive<usize>) -> Result<FamilyReport, LabelError> {
    let scheme = Scheme::for_family(template)?;
    let mut report = FamilyReport {
        family: format!("{template:?}"),
        passes: 0,
        failures: Vec::new(),
    };
    for n in ns {
        let spec = template.with_n(n);
        let outcome = build(&spec)
            .map_err(LabelError::from)
            .and_then(|g| scheme.apply(&g).and_then(|l| verify(&g, &l)));
        match outcome {
            Ok(r) if r.is_prime_labeling() => report.passes += 1,
            Ok(r) => report.failures.push(FamilyFailure {
                n,
                reason: format!(
                    "bijection_ok = {}, {} coprimality violations",
                    r.bijection_ok,
                    r.violations.len()
                ),
            }),
            Err(e) => report.failures.push(FamilyFailure { n, reason: e.to_string() }),
        }
    }
    Ok(report)
}
