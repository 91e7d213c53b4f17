//! Expected arborescence ratios under uniformly random voltages, by
//! three independent routes, plus the permutation moment identities the
//! closed form rests on.
//!
//! For a base graph with out-weight sum S_w at each vertex w and fold k,
//! the expected ratio over independent uniform voltages is
//! (1/k) * prod_w S_w^(k-1). This module computes that closed form,
//! the exact average of the determinant ratio over every voltage
//! assignment in (S_k)^|E|, and a seeded Monte Carlo estimate; all three
//! must agree, and the test suite holds them to it.
//!
//! Determinism contract: the exhaustive and Monte Carlo routes give
//! bitwise identical results for any worker count. Every sample derives
//! its generator from (seed, sample index) alone, and accumulation is
//! exact rational arithmetic, so the reduction order cannot matter.

use crate::cover::voltage_laplacian_matrix;
use crate::graph::{Permutation, WeightedDigraph};
use crate::ring::{Poly, Rational, RingError, VarId};
use num::{BigInt, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Default cap on exhaustive enumeration, in ratio evaluations.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpectError {
    #[error("enumeration needs {required} ratio evaluations but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Everything one run of the expectation machinery learned.
///
/// `formula_value` is always present. `exact_value` is the symbolic
/// exhaustive average, present when enumeration ran. The `mc_*` fields
/// are present when sampling ran: `mc_estimate` is the exact rational
/// mean of the sampled ratios, `mc_variance` the exact sample variance
/// (denominator n-1, zero when n <= 1), and `mc_stddev` a rational
/// approximation of its square root, good to 1e-6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectationReport {
    pub formula_value: Poly,
    pub exact_value: Option<Poly>,
    pub mc_estimate: Option<Rational>,
    pub mc_stddev: Option<Rational>,
    pub mc_variance: Option<Rational>,
    pub samples: u64,
    pub seed: u64,
    pub k: usize,
}

impl ExpectationReport {
    fn formula_only(g: &WeightedDigraph, k: usize) -> ExpectationReport {
        ExpectationReport {
            formula_value: expected_ratio_formula(g, k),
            exact_value: None,
            mc_estimate: None,
            mc_stddev: None,
            mc_variance: None,
            samples: 0,
            seed: 0,
            k,
        }
    }

    /// One tab-separated record:
    /// k, formula, exact, mc-estimate, mc-stddev, samples, seed.
    /// Absent optional fields print as `-`.
    pub fn porcelain_line(&self) -> String {
        let opt_poly = |p: &Option<Poly>| p.as_ref().map_or("-".to_string(), Poly::to_string);
        let opt_rat = |r: &Option<Rational>| {
            r.as_ref().map_or("-".to_string(), Rational::to_string)
        };
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.k,
            self.formula_value,
            opt_poly(&self.exact_value),
            opt_rat(&self.mc_estimate),
            opt_rat(&self.mc_stddev),
            self.samples,
            self.seed
        )
    }
}

impl fmt::Display for ExpectationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k: {}", self.k)?;
        writeln!(f, "formula: {}", self.formula_value)?;
        if let Some(exact) = &self.exact_value {
            writeln!(f, "exact: {exact}")?;
        }
        if let Some(est) = &self.mc_estimate {
            writeln!(f, "mc-estimate: {est}")?;
            if let Some(sd) = &self.mc_stddev {
                writeln!(f, "mc-stddev: {sd}")?;
            }
            writeln!(f, "samples: {}", self.samples)?;
            writeln!(f, "seed: {}", self.seed)?;
        }
        Ok(())
    }
}

/// The closed-form expected ratio:
/// (1/k) * prod over vertices w of (out-weight sum of w)^(k-1).
pub fn expected_ratio_formula(g: &WeightedDigraph, k: usize) -> Poly {
    assert!(k >= 1, "fold count must be at least 1");
    let mut product = Poly::one();
    for v in g.vertex_ids() {
        product = product.mul(&g.out_weight_sum(v).pow(k as u32 - 1));
    }
    product.scale(&crate::ring::frac(1, k as i64))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// (k!)^edges as a budget check; errors out rather than overflowing.
fn assignment_count(k: usize, edges: usize, budget: u128) -> Result<u128, ExpectError> {
    let kfact: u128 = (1..=k as u128).product();
    let mut total: u128 = 1;
    for _ in 0..edges {
        total = total.checked_mul(kfact).unwrap_or(u128::MAX);
        if total > budget {
            return Err(ExpectError::BudgetExceeded {
                required: total,
                budget,
            });
        }
    }
    Ok(total)
}

/// The voltage assignment with this index, reading the index as a
/// mixed-radix number: edge 0 is the most significant digit, and each
/// digit selects a permutation in lexicographic one-line order.
fn voltages_at_index(perms: &[Permutation], edges: usize, index: u128) -> Vec<Permutation> {
    let radix = perms.len() as u128;
    let mut digits = vec![0usize; edges];
    let mut rest = index;
    for slot in (0..edges).rev() {
        digits[slot] = (rest % radix) as usize;
        rest /= radix;
    }
    digits.into_iter().map(|d| perms[d].clone()).collect()
}

/// The exact expected ratio: the average of (1/k) det L over every
/// voltage assignment in (S_k)^|E|, as a polynomial in the weights.
/// Refuses to enumerate past `budget` assignments.
pub fn expected_ratio_exact(
    g: &WeightedDigraph,
    k: usize,
    budget: u128,
) -> Result<Poly, ExpectError> {
    assert!(k >= 1, "fold count must be at least 1");
    let total = assignment_count(k, g.edge_count(), budget)?;
    let perms = Permutation::all(k);
    let weights: Vec<Poly> = g.edges().iter().map(|e| e.weight.clone()).collect();
    let sum: Poly = (0..total as u64)
        .into_par_iter()
        .map(|idx| {
            let voltages = voltages_at_index(&perms, g.edge_count(), idx as u128);
            voltage_laplacian_matrix(g, k, &voltages, &weights)
                .determinant()
                .expect("square by construction")
        })
        .reduce(Poly::zero, |a, b| a.add(&b));
    Ok(sum.scale(&Rational::new(BigInt::one(), BigInt::from(k) * BigInt::from(total))))
}

fn evaluated_weights(
    g: &WeightedDigraph,
    assignment: &BTreeMap<VarId, Rational>,
) -> Result<Vec<Poly>, ExpectError> {
    g.edges()
        .iter()
        .map(|e| Ok(Poly::constant(e.weight.eval(assignment)?)))
        .collect()
}

fn ratio_value(
    g: &WeightedDigraph,
    k: usize,
    voltages: &[Permutation],
    weights: &[Poly],
) -> Rational {
    let det = voltage_laplacian_matrix(g, k, voltages, weights)
        .determinant()
        .expect("square by construction");
    let det = det.as_constant().expect("constant entries, constant det");
    det / Rational::from_integer(BigInt::from(k))
}

/// The exact expected ratio at a rational weight assignment: same
/// enumeration as [`expected_ratio_exact`], but weights are evaluated
/// first so each step is a rational determinant rather than a symbolic
/// one.
pub fn expected_ratio_exact_at(
    g: &WeightedDigraph,
    k: usize,
    assignment: &BTreeMap<VarId, Rational>,
    budget: u128,
) -> Result<Rational, ExpectError> {
    assert!(k >= 1, "fold count must be at least 1");
    let total = assignment_count(k, g.edge_count(), budget)?;
    let perms = Permutation::all(k);
    let weights = evaluated_weights(g, assignment)?;
    let sum: Rational = (0..total as u64)
        .into_par_iter()
        .map(|idx| {
            let voltages = voltages_at_index(&perms, g.edge_count(), idx as u128);
            ratio_value(g, k, &voltages, &weights)
        })
        .reduce(Rational::zero, |a, b| a + b);
    Ok(sum / Rational::from_integer(BigInt::from(total)))
}

/// Uniform draw from S_k by a Fisher-Yates shuffle of the identity.
/// The shuffle is spelled out here rather than delegated so the mapping
/// from generator stream to permutation is fixed by this crate.
pub fn uniform_permutation(k: usize, rng: &mut impl Rng) -> Permutation {
    let mut images: Vec<usize> = (1..=k).collect();
    for i in (1..k).rev() {
        let j = rng.gen_range(0..=i);
        images.swap(i, j);
    }
    Permutation::from_images(images).expect("shuffling preserves bijectivity")
}

/// Floor approximation of sqrt(x) with 6 decimal digits, as a rational.
fn sqrt_approx(x: &Rational) -> Rational {
    assert!(!x.is_negative(), "variance is nonnegative");
    let scale = BigInt::from(10u64.pow(6));
    let scaled = (x.numer() * &scale * &scale) / x.denom();
    Rational::new(scaled.sqrt(), scale)
}

struct Accumulated {
    mean: Rational,
    variance: Rational,
}

/// Exact mean and sample variance of `samples` ratio values produced by
/// `voltages_for`, accumulated in parallel.
fn accumulate_ratios(
    g: &WeightedDigraph,
    k: usize,
    weights: &[Poly],
    samples: u64,
    voltages_for: impl Fn(u64) -> Vec<Permutation> + Sync,
) -> Accumulated {
    let (sum, sum_sq) = (0..samples)
        .into_par_iter()
        .map(|i| {
            let voltages = voltages_for(i);
            let r = ratio_value(g, k, &voltages, weights);
            let sq = &r * &r;
            (r, sq)
        })
        .reduce(
            || (Rational::zero(), Rational::zero()),
            |a, b| (a.0 + b.0, a.1 + b.1),
        );
    let n = Rational::from_integer(BigInt::from(samples));
    let mean = &sum / &n;
    let variance = if samples <= 1 {
        Rational::zero()
    } else {
        (sum_sq - &sum * &sum / &n) / (n - Rational::one())
    };
    Accumulated { mean, variance }
}

/// Monte Carlo estimate of the expected ratio at a rational weight
/// assignment. Sample i draws one voltage per edge from a generator
/// seeded by `seed` on stream i, so results depend only on
/// (graph, k, samples, seed, assignment), never on scheduling.
pub fn expected_ratio_mc(
    g: &WeightedDigraph,
    k: usize,
    samples: u64,
    seed: u64,
    assignment: &BTreeMap<VarId, Rational>,
) -> Result<ExpectationReport, ExpectError> {
    assert!(k >= 1, "fold count must be at least 1");
    assert!(samples >= 1, "need at least one sample");
    let weights = evaluated_weights(g, assignment)?;
    let acc = accumulate_ratios(g, k, &weights, samples, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        (0..g.edge_count())
            .map(|_| uniform_permutation(k, &mut rng))
            .collect()
    });
    Ok(ExpectationReport {
        mc_estimate: Some(acc.mean),
        mc_stddev: Some(sqrt_approx(&acc.variance)),
        mc_variance: Some(acc.variance),
        samples,
        seed,
        ..ExpectationReport::formula_only(g, k)
    })
}

/// Debug variant of [`expected_ratio_mc`]: instead of random draws,
/// "sample" i is the i-th voltage assignment of the exhaustive
/// enumeration, covering (S_k)^|E| exactly once. The estimate then
/// equals [`expected_ratio_exact_at`] by construction.
pub fn expected_ratio_mc_exhaustive(
    g: &WeightedDigraph,
    k: usize,
    assignment: &BTreeMap<VarId, Rational>,
    budget: u128,
) -> Result<ExpectationReport, ExpectError> {
    assert!(k >= 1, "fold count must be at least 1");
    let total = assignment_count(k, g.edge_count(), budget)?;
    let perms = Permutation::all(k);
    let weights = evaluated_weights(g, assignment)?;
    let acc = accumulate_ratios(g, k, &weights, total as u64, |i| {
        voltages_at_index(&perms, g.edge_count(), i as u128)
    });
    Ok(ExpectationReport {
        mc_estimate: Some(acc.mean),
        mc_stddev: Some(sqrt_approx(&acc.variance)),
        mc_variance: Some(acc.variance),
        samples: total as u64,
        seed: 0,
        ..ExpectationReport::formula_only(g, k)
    })
}

/// The moment (1-t) (k-t)! / k!, defined for 1 <= t <= k-1.
pub fn y_moment_formula(k: usize, t: usize) -> Result<Rational, ExpectError> {
    if t < 1 || t >= k {
        return Err(ExpectError::Domain(format!(
            "t must satisfy 1 <= t <= k-1, got k={k}, t={t}"
        )));
    }
    Ok(Rational::new(
        BigInt::from(1i64 - t as i64) * factorial(k - t),
        factorial(k),
    ))
}

/// A centered-moment query: a pairing of t distinct source letters onto
/// t distinct image letters, all in {2..k}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentQuery {
    k: usize,
    pairing: Vec<(usize, usize)>,
}

impl MomentQuery {
    pub fn new(k: usize, pairing: Vec<(usize, usize)>) -> Result<MomentQuery, ExpectError> {
        let t = pairing.len();
        if t < 1 || t > k.saturating_sub(1) {
            return Err(ExpectError::Domain(format!(
                "pairing size must lie in 1..=k-1, got k={k}, t={t}"
            )));
        }
        let mut sources: Vec<usize> = pairing.iter().map(|&(i, _)| i).collect();
        let mut images: Vec<usize> = pairing.iter().map(|&(_, j)| j).collect();
        for list in [&mut sources, &mut images] {
            if list.iter().any(|&x| x < 2 || x > k) {
                return Err(ExpectError::Domain(format!(
                    "letters must lie in 2..={k}: {list:?}"
                )));
            }
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(ExpectError::Domain(format!("letters repeat: {list:?}")));
            }
        }
        Ok(MomentQuery { k, pairing })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.pairing.len()
    }

    pub fn pairing(&self) -> &[(usize, usize)] {
        &self.pairing
    }
}

/// The centered moment by exhaustive summation over S_k:
/// (1/k!) * sum over sigma of prod over pairs (i, j) of
/// ([sigma(i) = j] - [sigma(i) = 1]). Must agree with
/// [`y_moment_formula`] for every valid query of the same (k, t).
pub fn y_moment_bruteforce(q: &MomentQuery) -> Rational {
    let mut total: i64 = 0;
    for sigma in Permutation::all(q.k) {
        let mut product: i64 = 1;
        for &(i, j) in &q.pairing {
            let image = sigma.apply(i);
            let factor = (image == j) as i64 - (image == 1) as i64;
            product *= factor;
            if product == 0 {
                break;
            }
        }
        total += product;
    }
    Rational::new(BigInt::from(total), factorial(q.k))
}

/// The raw moment (1/k!) * sum over sigma of prod [sigma(i) = j], for a
/// pairing with distinct sources in {1..k} and arbitrary images in
/// {1..k}. Equals (k-t)!/k! when the images are distinct (the pairing
/// extends to (k-t)! permutations) and 0 otherwise.
pub fn x_moment_bruteforce(
    k: usize,
    pairing: &[(usize, usize)],
) -> Result<Rational, ExpectError> {
    if pairing.len() > k {
        return Err(ExpectError::Domain(format!(
            "pairing size {} exceeds k={k}",
            pairing.len()
        )));
    }
    let mut sources: Vec<usize> = pairing.iter().map(|&(i, _)| i).collect();
    sources.sort_unstable();
    if sources.windows(2).any(|w| w[0] == w[1]) {
        return Err(ExpectError::Domain("sources repeat".to_string()));
    }
    if pairing
        .iter()
        .any(|&(i, j)| i < 1 || i > k || j < 1 || j > k)
    {
        return Err(ExpectError::Domain(format!("letters must lie in 1..={k}")));
    }
    let mut matches: i64 = 0;
    for sigma in Permutation::all(k) {
        if pairing.iter().all(|&(i, j)| sigma.apply(i) == j) {
            matches += 1;
        }
    }
    Ok(Rational::new(BigInt::from(matches), factorial(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::ring::{frac, rat};

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn two_loops() -> WeightedDigraph {
        parse_graph(include_str!("../../../fixtures/two_loops.graph"))
            .unwrap()
            .into_base()
    }

    fn two_cycle() -> WeightedDigraph {
        parse_graph("vertex u\nvertex v\nedge u v weight p\nedge v u weight q\n")
            .unwrap()
            .into_base()
    }

    fn assignment(pairs: &[(&str, i64)]) -> BTreeMap<VarId, Rational> {
        pairs
            .iter()
            .map(|&(n, v)| (VarId::new(n).unwrap(), rat(v)))
            .collect()
    }

    #[test]
    fn formula_two_loops() {
        let f = expected_ratio_formula(&two_loops(), 3);
        assert_eq!(f, p("(a+b)^2").scale(&frac(1, 3)));
    }

    #[test]
    fn formula_is_one_at_fold_one() {
        for g in [two_loops(), two_cycle()] {
            assert_eq!(expected_ratio_formula(&g, 1), Poly::one());
        }
    }

    #[test]
    fn formula_three_vertex_base() {
        let vg = parse_graph(include_str!("../../../fixtures/three_cover.vgraph"))
            .unwrap()
            .into_voltage()
            .unwrap();
        let f = expected_ratio_formula(vg.base(), 3);
        assert_eq!(f, p("(a+b)^2 * c^2 * (d+e)^2").scale(&frac(1, 3)));
    }

    #[test]
    fn exact_matches_formula_on_two_loops() {
        let g = two_loops();
        let exact = expected_ratio_exact(&g, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(exact, expected_ratio_formula(&g, 3));
    }

    #[test]
    fn exact_matches_formula_on_two_cycle() {
        let g = two_cycle();
        let exact = expected_ratio_exact(&g, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(exact, p("p*q").scale(&frac(1, 2)));
        assert_eq!(exact, expected_ratio_formula(&g, 2));
    }

    #[test]
    fn exact_at_fold_one_is_one() {
        let g = two_cycle();
        assert_eq!(expected_ratio_exact(&g, 1, 10).unwrap(), Poly::one());
    }

    #[test]
    fn budget_is_enforced() {
        let g = two_loops();
        assert_eq!(
            expected_ratio_exact(&g, 3, 35),
            Err(ExpectError::BudgetExceeded {
                required: 36,
                budget: 35
            })
        );
    }

    #[test]
    fn average_of_determinants_is_determinant_of_degrees() {
        // Averaging det L itself over all assignments gives the degree
        // part's determinant, the product of out-weights to the k-1.
        for (g, k) in [(two_loops(), 3usize), (two_cycle(), 2), (two_cycle(), 3)] {
            let perms = Permutation::all(k);
            let weights: Vec<Poly> = g.edges().iter().map(|e| e.weight.clone()).collect();
            let total = perms.len().pow(g.edge_count() as u32);
            let mut sum = Poly::zero();
            for idx in 0..total {
                let voltages = voltages_at_index(&perms, g.edge_count(), idx as u128);
                let det = voltage_laplacian_matrix(&g, k, &voltages, &weights)
                    .determinant()
                    .unwrap();
                sum = sum.add(&det);
            }
            let average = sum.scale(&frac(1, total as i64));
            let degree_det = g
                .vertex_ids()
                .fold(Poly::one(), |acc, v| {
                    acc.mul(&g.out_weight_sum(v).pow(k as u32 - 1))
                });
            assert_eq!(average, degree_det, "k={k}");
        }
    }

    #[test]
    fn exact_at_point_matches_symbolic() {
        let g = two_loops();
        let at = assignment(&[("a", 1), ("b", 2)]);
        let numeric = expected_ratio_exact_at(&g, 3, &at, DEFAULT_BUDGET).unwrap();
        assert_eq!(numeric, rat(3));
        let symbolic = expected_ratio_exact(&g, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(symbolic.eval(&at).unwrap(), numeric);
    }

    #[test]
    fn exact_at_reports_missing_variables() {
        let g = two_loops();
        let at = assignment(&[("a", 1)]);
        assert!(matches!(
            expected_ratio_exact_at(&g, 2, &at, DEFAULT_BUDGET),
            Err(ExpectError::Ring(RingError::MissingVariable(_)))
        ));
    }

    #[test]
    fn mc_is_reproducible_and_scheduler_independent() {
        let g = two_loops();
        let at = assignment(&[("a", 1), ("b", 2)]);
        let run = || expected_ratio_mc(&g, 3, 500, 7, &at).unwrap();
        let baseline = run();
        assert_eq!(run(), baseline);
        for threads in [1, 2, 4] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let report = pool.install(run);
            assert_eq!(report, baseline, "worker count {threads}");
        }
    }

    #[test]
    fn mc_lands_near_the_formula_value() {
        let g = two_loops();
        let at = assignment(&[("a", 1), ("b", 2)]);
        let report = expected_ratio_mc(&g, 3, 10_000, 42, &at).unwrap();
        let est = report.mc_estimate.clone().unwrap();
        let var = report.mc_variance.clone().unwrap();
        let target = rat(3);
        // |est - 3| <= 3 * stddev / sqrt(n), compared in squares to stay
        // exact: (est - 3)^2 <= 9 * var / 10^4.
        let gap = &est - &target;
        assert!(
            &gap * &gap <= var * frac(9, 10_000),
            "estimate {est} too far from {target}"
        );
    }

    #[test]
    fn mc_at_fold_one_is_exactly_one() {
        let g = two_cycle();
        let at = assignment(&[("p", 2), ("q", 5)]);
        let report = expected_ratio_mc(&g, 1, 50, 9, &at).unwrap();
        assert_eq!(report.mc_estimate, Some(rat(1)));
        assert_eq!(report.mc_variance, Some(rat(0)));
        assert_eq!(report.mc_stddev, Some(rat(0)));
    }

    #[test]
    fn exhaustive_mc_equals_exact_at() {
        let g = two_cycle();
        let at = assignment(&[("p", 2), ("q", 3)]);
        for k in [2usize, 3] {
            let report = expected_ratio_mc_exhaustive(&g, k, &at, DEFAULT_BUDGET).unwrap();
            let exact = expected_ratio_exact_at(&g, k, &at, DEFAULT_BUDGET).unwrap();
            assert_eq!(report.mc_estimate, Some(exact));
        }
    }

    #[test]
    fn uniform_permutation_k1_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            assert!(uniform_permutation(1, &mut rng).is_identity());
        }
    }

    #[test]
    fn uniform_permutation_is_deterministic_per_stream() {
        let draw = |seed, stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            uniform_permutation(5, &mut rng)
        };
        assert_eq!(draw(3, 17), draw(3, 17));
        assert_ne!(draw(3, 17), draw(3, 18));
    }

    #[test]
    fn uniform_permutation_frequencies_are_flat() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for _ in 0..60_000 {
            let s = uniform_permutation(3, &mut rng);
            *counts.entry(s.to_string()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 6);
        // Binomial stddev is sqrt(60000 * (1/6)(5/6)) ~ 91.3; stay
        // within 5 sigma of the mean 10000.
        for (perm, count) in counts {
            assert!(
                (9544..=10456).contains(&count),
                "permutation {perm} drawn {count} times"
            );
        }
    }

    #[test]
    fn y_formula_known_values() {
        assert_eq!(y_moment_formula(5, 1).unwrap(), rat(0));
        assert_eq!(y_moment_formula(3, 2).unwrap(), frac(-1, 6));
        assert_eq!(y_moment_formula(4, 3).unwrap(), frac(-1, 12));
        assert!(y_moment_formula(3, 0).is_err());
        assert!(y_moment_formula(3, 3).is_err());
    }

    #[test]
    fn y_bruteforce_matches_formula_exhaustively_at_k3() {
        for t in 1..=2 {
            let formula = y_moment_formula(3, t).unwrap();
            for sources in subsets(&[2, 3], t) {
                for images in subsets(&[2, 3], t) {
                    for pairing in bijections(&sources, &images) {
                        let q = MomentQuery::new(3, pairing).unwrap();
                        assert_eq!(y_moment_bruteforce(&q), formula, "t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn y_bruteforce_is_pairing_independent() {
        let idcheck = MomentQuery::new(3, vec![(2, 2), (3, 3)]).unwrap();
        let swapped = MomentQuery::new(3, vec![(2, 3), (3, 2)]).unwrap();
        assert_eq!(y_moment_bruteforce(&idcheck), frac(-1, 6));
        assert_eq!(y_moment_bruteforce(&swapped), frac(-1, 6));
    }

    #[test]
    fn x_moment_known_values() {
        assert_eq!(
            x_moment_bruteforce(3, &[(1, 2), (2, 1)]).unwrap(),
            frac(1, 6)
        );
        assert_eq!(
            x_moment_bruteforce(3, &[(1, 2), (2, 2)]).unwrap(),
            rat(0)
        );
        assert_eq!(
            x_moment_bruteforce(3, &[(1, 3), (2, 1), (3, 2)]).unwrap(),
            frac(1, 6)
        );
        assert!(x_moment_bruteforce(3, &[(1, 2), (1, 3)]).is_err());
    }

    #[test]
    fn moment_query_validation() {
        assert!(MomentQuery::new(3, vec![]).is_err());
        assert!(MomentQuery::new(3, vec![(1, 2)]).is_err());
        assert!(MomentQuery::new(3, vec![(2, 2), (2, 3)]).is_err());
        assert!(MomentQuery::new(3, vec![(2, 2), (3, 2)]).is_err());
        assert!(MomentQuery::new(3, vec![(2, 2), (3, 3), (4, 4)]).is_err());
    }

    #[test]
    fn report_text_forms() {
        let g = two_loops();
        let at = assignment(&[("a", 1), ("b", 2)]);
        let report = expected_ratio_mc(&g, 1, 2, 5, &at).unwrap();
        let text = report.to_string();
        assert!(text.contains("k: 1"));
        assert!(text.contains("formula: 1"));
        assert!(text.contains("mc-estimate: 1"));
        assert!(text.contains("seed: 5"));
        assert_eq!(report.porcelain_line(), "1\t1\t-\t1\t0\t2\t5");
    }

    fn subsets(pool: &[usize], size: usize) -> Vec<Vec<usize>> {
        if size == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (i, &x) in pool.iter().enumerate() {
            for mut rest in subsets(&pool[i + 1..], size - 1) {
                rest.insert(0, x);
                out.push(rest);
            }
        }
        out
    }

    fn bijections(sources: &[usize], images: &[usize]) -> Vec<Vec<(usize, usize)>> {
        let t = sources.len();
        Permutation::all(t)
            .into_iter()
            .map(|s| {
                (0..t)
                    .map(|i| (sources[i], images[s.apply(i + 1) - 1]))
                    .collect()
            })
            .collect()
    }
}
