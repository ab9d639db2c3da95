//! Randomized invariant checks shared by the `properties` and `acceptance`
//! test targets. Each check runs `CASES` cases from a deterministic RNG.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Debug;

use itertools::Itertools;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};

use prime_weave::graph::{build, enumerate_unicyclic, is_unicyclic, parse_graph, serialize_graph, FamilySpec, Graph, VertexRole};
use prime_weave::labelings::{hairy7_cycle_label, label_family, verify, weed_block, weed_cycle_label, Labeling};
use prime_weave::numth::{find_pillai_run, gcd, is_prime, largest_prime_in_range};
use prime_weave::solver::{count_labelings, solve, Budget, Outcome};

pub const CASES: u32 = 1000;

pub type Check = fn() -> Result<(), String>;

fn check<S>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: Debug,
{
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

/// Binary gcd, independent of the library's Euclid.
fn naive_gcd(mut a: u64, mut b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a | b;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    while b != 0 {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
    }
    a << shift
}

fn naive_pillai(start: u64, m: u64) -> bool {
    let w: Vec<u64> = (start..start + m).collect();
    w.iter()
        .all(|&x| w.iter().any(|&y| y != x && naive_gcd(x, y) > 1))
}

/// Arbitrary simple graph on `1..=max_n` vertices.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
            let edges = pairs.iter().zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| *e);
            Graph::new(n, edges).unwrap()
        })
    })
}

/// Families with a constructive labeler, at sizes that keep a case cheap.
pub fn arb_labeled_family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (2..=500usize).prop_map(|n| FamilySpec::Path { n }),
        (3..=500usize).prop_map(|n| FamilySpec::Cycle { n }),
        (1..=500usize).prop_map(|n| FamilySpec::Star { n }),
        (3..=200usize, prop_oneof![Just(3usize), Just(5), Just(7)]).prop_map(|(n, m)| FamilySpec::HairyCycle { n, m }),
        (3..=12usize).prop_map(|n| FamilySpec::BertrandWeed { n }),
        (3..=100usize, 1..=2usize).prop_map(|(n, levels)| FamilySpec::CyclePendantStar { n, levels }),
    ]
}

pub fn arb_family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        arb_labeled_family(),
        (3..=40usize, 1..=16usize).prop_map(|(n, m)| FamilySpec::HairyCycle { n, m }),
        (3..=40usize, 1..=6usize).prop_map(|(n, m)| FamilySpec::CyclePath { n, m }),
    ]
}

fn role_label(g: &Graph, l: &Labeling, r: VertexRole) -> u64 {
    l.label(g.vertex_of(r).unwrap()).unwrap()
}

// --- numth ---------------------------------------------------------------

pub fn gcd_divisibility() -> Result<(), String> {
    check((1..=1_000_000u64, 1..=1_000_000u64), |(a, b)| {
        let d = gcd(a, b).unwrap();
        prop_assert_eq!(gcd(b, a).unwrap(), d);
        prop_assert_eq!(d, naive_gcd(a, b));
        prop_assert!(a % d == 0 && b % d == 0);
        // every common divisor divides d: check through the cofactors
        prop_assert_eq!(gcd(a / d, b / d).unwrap(), 1);
        Ok(())
    })
}

pub fn consecutive_coprime() -> Result<(), String> {
    check(0..=u32::MAX as u64, |a| {
        prop_assert_eq!(gcd(a, a + 1).unwrap(), 1);
        let odd = a | 1;
        prop_assert_eq!(gcd(odd, odd + 2).unwrap(), 1);
        Ok(())
    })
}

pub fn bertrand_at_powers_of_two() -> Result<(), String> {
    for i in 2..=20u32 {
        let (lo, hi) = ((1u64 << i) - 1, (1u64 << (i + 1)) - 2);
        match largest_prime_in_range(lo, hi) {
            Ok(Some(p)) if is_prime(p) && p > lo && p <= hi => {}
            other => return Err(format!("i = {i}: {other:?}")),
        }
    }
    Ok(())
}

pub fn pillai_minimal() -> Result<(), String> {
    check((2..=18u64, 1..=2500u64), |(m, limit)| {
        let found = find_pillai_run(m, limit).unwrap();
        let first = (1..=limit).find(|&s| naive_pillai(s, m));
        prop_assert_eq!(found.map(|r| r.start), first);
        if let Some(r) = found {
            prop_assert_eq!(r.length, m);
        }
        Ok(())
    })
}

// --- graph -----------------------------------------------------------------

pub fn hairy_degrees() -> Result<(), String> {
    check((3..=60usize, 1..=16usize), |(n, m)| {
        let g = build(&FamilySpec::HairyCycle { n, m }).unwrap();
        for v in 0..g.n() {
            match g.role(v).unwrap() {
                VertexRole::Cycle(_) => prop_assert_eq!(g.degree(v), m + 2),
                VertexRole::Pendant(..) => prop_assert_eq!(g.degree(v), 1),
                r => return Err(TestCaseError::fail(format!("unexpected role {r:?}"))),
            }
        }
        Ok(())
    })
}

pub fn weed_pendant_counts() -> Result<(), String> {
    check(3..=12usize, |n| {
        let g = build(&FamilySpec::BertrandWeed { n }).unwrap();
        for i in 1..=n {
            let c = g.vertex_of(VertexRole::Cycle(i)).unwrap();
            let pendants = g
                .neighbors(c)
                .iter()
                .filter(|&&v| matches!(g.role(v), Some(VertexRole::Pendant(..))))
                .count();
            prop_assert_eq!(pendants, (1usize << i) - 1);
        }
        Ok(())
    })
}

pub fn cps1_degrees() -> Result<(), String> {
    check(3..=100usize, |n| {
        let g = build(&FamilySpec::CyclePendantStar { n, levels: 1 }).unwrap();
        for v in 0..g.n() {
            let expected = match g.role(v).unwrap() {
                VertexRole::Cycle(_) => 3,
                VertexRole::Pendant(..) => 4,
                _ => 1,
            };
            prop_assert_eq!(g.degree(v), expected);
        }
        Ok(())
    })
}

pub fn families_are_unicyclic() -> Result<(), String> {
    check(arb_family(), |spec| {
        let g = build(&spec).unwrap();
        let expect = !matches!(spec, FamilySpec::Path { .. } | FamilySpec::Star { .. });
        prop_assert_eq!(is_unicyclic(&g), expect);
        prop_assert_eq!(g.n(), spec.vertex_count());
        Ok(())
    })
}

pub fn enumeration_contains_cycle() -> Result<(), String> {
    for n in 3..=9 {
        let cycle = build(&FamilySpec::Cycle { n }).unwrap().without_roles();
        let mut seen = false;
        for g in enumerate_unicyclic(n).unwrap() {
            if !is_unicyclic(&g) {
                return Err(format!("n = {n}: enumerated a non-unicyclic graph"));
            }
            seen |= g == cycle;
        }
        if !seen {
            return Err(format!("n = {n}: C_n missing"));
        }
    }
    Ok(())
}

pub fn json_round_trip() -> Result<(), String> {
    let graphs = prop_oneof![arb_graph(14), arb_family().prop_map(|s| build(&s).unwrap())];
    check(graphs, |g| {
        let text = serialize_graph(&g);
        prop_assert_eq!(parse_graph(&text).unwrap(), g);
        Ok(())
    })
}

// --- labelings ---------------------------------------------------------------

pub fn labelers_are_prime() -> Result<(), String> {
    check(arb_labeled_family(), |spec| {
        let (g, l) = label_family(&spec).unwrap();
        let report = verify(&g, &l).unwrap();
        prop_assert!(report.bijection_ok, "{:?} not a bijection", spec);
        prop_assert!(report.violations.is_empty(), "{:?}: {:?}", spec, report.violations.first());
        Ok(())
    })
}

pub fn hairy7_residues() -> Result<(), String> {
    check(2..=1_000_000usize, |i| {
        let c = hairy7_cycle_label(i);
        prop_assert!(!c.is_multiple_of(2) && !c.is_multiple_of(3) && !c.is_multiple_of(5), "i = {}, label {}", i, c);
        Ok(())
    })
}

pub fn weed_cycle_primes() -> Result<(), String> {
    check(2..=20usize, |i| {
        let p = weed_cycle_label(i).unwrap();
        prop_assert!(is_prime(p));
        let block = weed_block(i);
        prop_assert!(block.contains(&p));
        prop_assert!(2 * p > *block.end());
        for x in block {
            if x != p {
                prop_assert_eq!(gcd(p, x).unwrap(), 1);
            }
        }
        Ok(())
    })
}

pub fn cps1_cycle_mod5() -> Result<(), String> {
    check(3..=100usize, |n| {
        let (g, l) = label_family(&FamilySpec::CyclePendantStar { n, levels: 1 }).unwrap();
        for i in 1..=n {
            prop_assert_eq!(role_label(&g, &l, VertexRole::Cycle(i)) % 5, 1);
        }
        Ok(())
    })
}

pub fn clump_blocks() -> Result<(), String> {
    let specs = prop_oneof![
        (3..=60usize, prop_oneof![Just(3usize), Just(5), Just(7)]).prop_map(|(n, m)| FamilySpec::HairyCycle { n, m }),
        (3..=10usize).prop_map(|n| FamilySpec::BertrandWeed { n }),
        (3..=60usize, 1..=2usize).prop_map(|(n, levels)| FamilySpec::CyclePendantStar { n, levels }),
    ];
    check(specs, |spec| {
        let (g, l) = label_family(&spec).unwrap();
        let n = spec.n();
        for i in 1..=n {
            let expected: BTreeSet<u64> = match spec {
                FamilySpec::HairyCycle { m, .. } => {
                    let w = m as u64 + 1;
                    (w * (i as u64 - 1) + 1..=w * i as u64).collect()
                }
                FamilySpec::BertrandWeed { .. } => ((1u64 << i) - 1..=(1u64 << (i + 1)) - 2).collect(),
                FamilySpec::CyclePendantStar { levels: 1, .. } => (5 * i as u64 - 4..=5 * i as u64).collect(),
                _ => (14 * i as u64 - 13..=14 * i as u64).collect(),
            };
            let actual: BTreeSet<u64> = (0..g.n())
                .filter(|&v| g.role(v).unwrap().clump() == i)
                .map(|v| l.label(v).unwrap())
                .collect();
            prop_assert_eq!(actual, expected, "clump {}", i);
        }
        Ok(())
    })
}

pub fn hairy7_pendant_permutation() -> Result<(), String> {
    let strategy = (3..=40usize).prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<u64>(), n)));
    check(strategy, |(n, seeds)| {
        let (g, l) = label_family(&FamilySpec::HairyCycle { n, m: 7 }).unwrap();
        let mut labels = l.into_vec();
        for (i, seed) in (1..=n).zip(seeds) {
            let vs: Vec<usize> = (1..=7).map(|j| g.vertex_of(VertexRole::Pendant(i, j)).unwrap()).collect();
            let mut vals: Vec<u64> = vs.iter().map(|&v| labels[v]).collect();
            // Fisher-Yates driven by the seed
            let mut s = seed;
            for k in (1..vals.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                vals.swap(k, (s >> 33) as usize % (k + 1));
            }
            for (&v, x) in vs.iter().zip(vals) {
                labels[v] = x;
            }
        }
        prop_assert!(verify(&g, &Labeling::new(labels)).unwrap().is_prime_labeling());
        Ok(())
    })
}

// --- solver ------------------------------------------------------------------

/// All prime labelings of `g` by plain permutation enumeration.
pub fn all_prime_labelings(g: &Graph) -> Vec<Vec<u64>> {
    let n = g.n();
    (1..=n as u64)
        .permutations(n)
        .filter(|p| g.edges().iter().all(|&(u, v)| naive_gcd(p[u], p[v]) == 1))
        .collect()
}

pub fn solver_agrees_with_counter() -> Result<(), String> {
    check(arb_graph(7), |g| {
        let stats = solve(&g, Budget::unlimited());
        let count = count_labelings(&g, 10).unwrap();
        match &stats.outcome {
            Outcome::Found(l) => {
                prop_assert!(count > 0);
                prop_assert!(verify(&g, l).unwrap().is_prime_labeling());
            }
            Outcome::ExhaustedNoSolution => prop_assert_eq!(count, 0),
            Outcome::BudgetExceeded => return Err(TestCaseError::fail("unlimited budget exceeded")),
        }
        Ok(())
    })
}

pub fn formula_among_solutions() -> Result<(), String> {
    // clump families start at 12 vertices, above the counting guard
    let specs = prop_oneof![
        (2..=8usize).prop_map(|n| FamilySpec::Path { n }),
        (3..=8usize).prop_map(|n| FamilySpec::Cycle { n }),
        (1..=7usize).prop_map(|n| FamilySpec::Star { n }),
    ];
    check(specs, |spec| {
        let (g, l) = label_family(&spec).unwrap();
        let all = all_prime_labelings(&g);
        prop_assert_eq!(all.len() as u64, count_labelings(&g, 10).unwrap());
        prop_assert!(all.contains(&l.into_vec()));
        Ok(())
    })
}

pub fn budget_monotone() -> Result<(), String> {
    check((arb_graph(9), 1..=200u64, 0..=200u64), |(g, small, extra)| {
        let a = solve(&g, Budget::nodes(small));
        let b = solve(&g, Budget::nodes(small + extra));
        if let Outcome::Found(_) = a.outcome {
            prop_assert_eq!(&b.outcome, &a.outcome);
            prop_assert_eq!(b.nodes_expanded, a.nodes_expanded);
        }
        if b.outcome == Outcome::BudgetExceeded {
            prop_assert_eq!(a.outcome, Outcome::BudgetExceeded);
        }
        Ok(())
    })
}

pub fn solver_deterministic() -> Result<(), String> {
    check(arb_graph(9), |g| {
        let a = solve(&g, Budget::default());
        let b = solve(&g, Budget::default());
        prop_assert_eq!(a.outcome, b.outcome);
        prop_assert_eq!(a.nodes_expanded, b.nodes_expanded);
        prop_assert_eq!(a.backtracks, b.backtracks);
        Ok(())
    })
}

pub fn pruning_sound() -> Result<(), String> {
    let strategy = arb_graph(6)
        .prop_filter("needs an edge", |g| g.edge_count() > 0)
        .prop_flat_map(|g| {
            let n = g.n();
            let e = g.edge_count();
            (Just(g), 0..e, Just((1..=n as u64).collect::<Vec<_>>()).prop_shuffle())
        });
    check(strategy, |(g, edge_idx, perm)| {
        let (u, v) = g.edges()[edge_idx];
        // partial assignment: u and v only
        let (lu, lv) = (perm[u], perm[v]);
        if naive_gcd(lu, lv) == 1 {
            return Ok(());
        }
        for full in all_prime_labelings(&g) {
            prop_assert!(!(full[u] == lu && full[v] == lv), "rejected pair extends to {:?}", full);
        }
        Ok(())
    })
}

pub const ALL: &[(&str, Check)] = &[
    ("numth: gcd divides both arguments and is maximal", gcd_divisibility),
    ("numth: consecutive and odd-gap-2 integers are coprime", consecutive_coprime),
    ("numth: Bertrand block prime present for i in 2..=20", bertrand_at_powers_of_two),
    ("numth: find_pillai_run returns the least window", pillai_minimal),
    ("graph: hairy cycle degrees", hairy_degrees),
    ("graph: Bertrand weed pendant counts", weed_pendant_counts),
    ("graph: one-level ternary degrees", cps1_degrees),
    ("graph: families are unicyclic except path and star", families_are_unicyclic),
    ("graph: enumeration contains C_n", enumeration_contains_cycle),
    ("graph: JSON round trip", json_round_trip),
    ("labelings: constructive labelings verify", labelers_are_prime),
    ("labelings: 7-hairy cycle labels avoid 2, 3, 5", hairy7_residues),
    ("labelings: Bertrand cycle labels are large primes", weed_cycle_primes),
    ("labelings: one-level ternary cycle labels are 1 mod 5", cps1_cycle_mod5),
    ("labelings: clumps use consecutive blocks", clump_blocks),
    ("labelings: 7-hairy pendant order is free", hairy7_pendant_permutation),
    ("solver: agrees with brute-force count", solver_agrees_with_counter),
    ("solver: formula labeling is among enumerated solutions", formula_among_solutions),
    ("solver: larger budget never loses a solution", budget_monotone),
    ("solver: deterministic reruns", solver_deterministic),
    ("solver: gcd pruning is sound", pruning_sound),
];
