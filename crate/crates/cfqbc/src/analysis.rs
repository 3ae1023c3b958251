//! Closed-form security quantities, their enumeration-based oracles,
//! adversary-optimal splitter searches, and the (m, n) parameter planner.

use crate::error::{Error, Result};
use crate::numeric::{pow, rat, Rat, Scalar};
use crate::optics::{per_photon_distribution, DetectorId, PhotonSource, SenderMode, SplitterConfig};
use crate::rounds::{classify_alice, classify_bob, joint_distribution, AliceKnowledge, BobKnowledge};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Per-slot masses of the three joint-detection situations: both photons at
/// Alice's site, both at Bob's site, and the `DB1`-plus-Alice split. The
/// equality prior of 1/2 is not yet applied.
struct SlotCases<T> {
    both_at_alice: T,
    both_at_bob: T,
    db1_with_alice: T,
}

fn slot_cases<T: Scalar>(config: &SplitterConfig<T>) -> SlotCases<T> {
    let alice = per_photon_distribution(PhotonSource::AlicePhoton, true, config);
    let bob_eq = per_photon_distribution(PhotonSource::BobPhoton, true, config);

    let site = |dist: &crate::optics::DetectorDistribution<T>, alice_side: bool| {
        DetectorId::ALL
            .iter()
            .filter(|d| d.is_alice_side() == alice_side)
            .fold(T::zero(), |acc, &d| acc + dist.get(d))
    };

    let alice_photon_stays = site(&alice, true);
    let alice_photon_crosses = site(&alice, false);
    let bob_photon_crosses = site(&bob_eq, true);
    let bob_photon_stays = site(&bob_eq, false);

    // Both photons at Alice requires equal bits (differing bits park Bob's
    // photon in DB0). Both at Bob happens with certainty-weight 1 for
    // Alice's crossing photon when bits differ, plus the equal-bits product.
    let both_at_alice = alice_photon_stays.clone() * bob_photon_crosses.clone();
    let both_at_bob = alice_photon_crosses.clone() * (T::one() + bob_photon_stays);

    // DB1 clicks while the other photon sits at an Alice detector; only the
    // equal-bits case contributes.
    let db1_with_alice = alice_photon_stays * bob_eq.get(DetectorId::DB1)
        + bob_photon_crosses * alice.get(DetectorId::DB1);

    SlotCases {
        both_at_alice,
        both_at_bob,
        db1_with_alice,
    }
}

/// P_A: probability per slot that Alice confirms Bob learned her bit (both
/// photons ended up on a single party's side).
pub fn p_a_closed<T: Scalar>(config: &SplitterConfig<T>) -> T {
    let cases = slot_cases(config);
    T::half() * (cases.both_at_alice + cases.both_at_bob)
}

/// P_B: probability per slot that Bob learns Alice's bit with certainty; the
/// `DB1`-with-Alice case is the only knowledge Bob gains beyond P_A.
pub fn p_b_closed<T: Scalar>(config: &SplitterConfig<T>) -> T {
    let cases = slot_cases(config);
    T::half() * (cases.both_at_alice + cases.both_at_bob + cases.db1_with_alice)
}

/// Enumeration oracle for P_A: classify every joint-outcome atom.
pub fn p_a_enum<T: Scalar>(config: &SplitterConfig<T>) -> T {
    joint_distribution(config, SenderMode::SinglePhoton, SenderMode::SinglePhoton)
        .probability_of(|o| classify_alice(o) == AliceKnowledge::BobKnows)
}

/// Enumeration oracle for P_B.
pub fn p_b_enum<T: Scalar>(config: &SplitterConfig<T>) -> T {
    joint_distribution(config, SenderMode::SinglePhoton, SenderMode::SinglePhoton)
        .probability_of(|o| classify_bob(o, false) != BobKnowledge::Unknown)
}

/// P(Aalter) = (1 - P_B) / (1 - P_A): the chance one flipped bit in a
/// sequence escapes Bob's checks.
pub fn p_alter<T: Scalar>(config: &SplitterConfig<T>) -> Result<T> {
    alter_ratio(p_a_closed(config), p_b_closed(config))
}

fn alter_ratio<T: Scalar>(p_a: T, p_b: T) -> Result<T> {
    if p_a == T::one() {
        return Err(Error::UndefinedAlterRatio);
    }
    Ok(p_b.complement() / p_a.complement())
}

/// Number of sequences and slots per sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecurityParams {
    pub m: u32,
    pub n: u32,
}

impl SecurityParams {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::OutOfRange {
                what: "security parameters",
                value: 0.0,
                range: "m, n >= 1",
            });
        }
        Ok(Self { m, n })
    }

    pub fn rounds(&self) -> u64 {
        self.m as u64 * self.n as u64
    }
}

/// Binding and concealing thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct SecurityTargets {
    pub alpha: Rat,
    pub beta: Rat,
}

impl SecurityTargets {
    pub fn new(alpha: Rat, beta: Rat) -> Result<Self> {
        for (what, value) in [("alpha", &alpha), ("beta", &beta)] {
            if *value <= Rat::zero() || *value >= Rat::one() {
                return Err(Error::OutOfRange {
                    what,
                    value: value.to_f64(),
                    range: "(0, 1)",
                });
            }
        }
        Ok(Self { alpha, beta })
    }
}

/// Per-slot rates together with the derived multi-round quantities at some
/// (m, n).
#[derive(Debug, Clone, PartialEq)]
pub struct SecurityQuantities<T> {
    pub p_a: T,
    pub p_b: T,
    pub p_alter: T,
    pub epsilon: T,
    pub bob_advantage: T,
}

/// Assemble all security quantities from the two per-slot rates.
pub fn security_quantities<T: Scalar>(
    p_a: T,
    p_b: T,
    params: SecurityParams,
) -> Result<SecurityQuantities<T>> {
    let p_alter = alter_ratio(p_a.clone(), p_b.clone())?;
    let bounds = concealing_bounds(params.m, params.n, &p_b);
    Ok(SecurityQuantities {
        p_a,
        p_b,
        p_alter,
        epsilon: bounds.epsilon,
        bob_advantage: bounds.advantage,
    })
}

/// Probability quantities of the concealing analysis at given (m, n).
#[derive(Debug, Clone, PartialEq)]
pub struct ConcealingBounds<T> {
    /// Probability that Bob fully determines the commit bit from at least
    /// one sequence: 1 - (1 - p_B^n)^m.
    pub epsilon: T,
    /// Probability Bob names the right commit bit: 1/2 + epsilon/2.
    pub p_bknows: T,
    /// Bob's advantage over a fair guess: epsilon/2.
    pub advantage: T,
}

/// Evaluate the concealing quantities exactly.
pub fn concealing_bounds<T: Scalar>(m: u32, n: u32, p_b: &T) -> ConcealingBounds<T> {
    let epsilon = pow(&p_b.clone(), n).complement();
    let epsilon = pow(&epsilon, m).complement();
    let advantage = T::half() * epsilon.clone();
    ConcealingBounds {
        p_bknows: T::half() + advantage.clone(),
        epsilon,
        advantage,
    }
}

/// Bob's concealing advantage 1/2 - (1 - p_B^n)^m / 2.
pub fn concealing_advantage<T: Scalar>(m: u32, n: u32, p_b: &T) -> T {
    concealing_bounds(m, n, p_b).advantage
}

const SEARCH_CAP: u32 = 20_000_000;

/// Smallest m with p_alter^m < alpha. The inequality is strict: a bound that
/// lands exactly on an integer moves to the next one.
pub fn binding_min_m(alpha: &Rat, p_alter: &Rat) -> Result<u32> {
    if *alpha <= Rat::zero() || *alpha >= Rat::one() {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha.to_f64(),
            range: "(0, 1)",
        });
    }
    if *p_alter >= Rat::one() {
        return Err(Error::NoFiniteSequenceCount {
            p_alter: p_alter.to_f64(),
        });
    }
    if *p_alter <= Rat::zero() {
        return Err(Error::OutOfRange {
            what: "p_alter",
            value: p_alter.to_f64(),
            range: "(0, 1)",
        });
    }

    // Float estimate, then exact adjustment; logs only seed the search, so
    // the result is base-invariant by construction.
    let estimate = alpha.to_f64().ln() / p_alter.to_f64().ln();
    if !estimate.is_finite() || estimate > SEARCH_CAP as f64 {
        return Err(Error::OutOfRange {
            what: "m estimate",
            value: estimate,
            range: "at most 2e7 sequences",
        });
    }
    let mut m = (estimate.floor() as i64 - 4).max(1) as u32;
    let mut power = pow(p_alter, m);
    while power >= *alpha {
        m += 1;
        power *= p_alter;
        if m > SEARCH_CAP {
            return Err(Error::NoFiniteSequenceCount {
                p_alter: p_alter.to_f64(),
            });
        }
    }
    // Guard against a float estimate that overshot the answer.
    while m > 1 && pow(p_alter, m - 1) < *alpha {
        m -= 1;
    }
    Ok(m)
}

/// Smallest n whose concealing advantage at (m, n) is strictly below beta.
pub fn concealing_min_n(beta: &Rat, m: u32, p_b: &Rat) -> Result<u32> {
    if *beta <= Rat::zero() || *beta >= rat(1, 2) {
        return Err(Error::OutOfRange {
            what: "beta",
            value: beta.to_f64(),
            range: "(0, 1/2)",
        });
    }
    if *p_b <= Rat::zero() || *p_b >= Rat::one() {
        return Err(Error::DegenerateKnowledgeRate { p_b: p_b.to_f64() });
    }

    let advantage_ok = |n: u32| concealing_advantage(m, n, p_b) < *beta;

    let inner = 1.0 - (1.0 - 2.0 * beta.to_f64()).powf(1.0 / m as f64);
    let estimate = inner.ln() / p_b.to_f64().ln();
    if !estimate.is_finite() || estimate > SEARCH_CAP as f64 {
        return Err(Error::OutOfRange {
            what: "n estimate",
            value: estimate,
            range: "at most 2e7 slots",
        });
    }
    let mut n = (estimate.floor() as i64 - 4).max(1) as u32;
    while !advantage_ok(n) {
        n += 1;
        if n > SEARCH_CAP {
            return Err(Error::OutOfRange {
                what: "n",
                value: n as f64,
                range: "at most 2e7 slots",
            });
        }
    }
    while n > 1 && advantage_ok(n - 1) {
        n -= 1;
    }
    Ok(n)
}

/// Result of the malicious-Alice splitter search (Bob honest at 1/2).
#[derive(Debug, Clone, PartialEq)]
pub struct MaliciousAliceOptimum {
    pub t_a: Rat,
    pub p_alter: Rat,
    pub p_a: Rat,
    pub p_b: Rat,
}

/// Maximize P(Aalter) over Alice's transmissivity with Bob honest.
///
/// The alter ratio is monotone nonincreasing in t_A (checked exactly on the
/// grid); the optimum sits at t_A = 0.
pub fn optimize_malicious_alice() -> MaliciousAliceOptimum {
    let half = rat(1, 2);
    let grid_steps = 200;
    let ratio_at = |t_a: Rat| {
        let config = SplitterConfig::new(t_a, half.clone(), half.clone()).unwrap();
        p_alter(&config).expect("P_A < 1 on the malicious-Alice line")
    };

    let mut best_t = rat(0, 1);
    let mut best = ratio_at(best_t.clone());
    let mut previous = best.clone();
    for k in 1..=grid_steps {
        let t_a = rat(k, grid_steps);
        let value = ratio_at(t_a.clone());
        debug_assert!(value <= previous, "alter ratio not monotone at t_A = {t_a}");
        if value > best {
            best = value.clone();
            best_t = t_a;
        }
        previous = value;
    }

    let config = SplitterConfig::new(best_t.clone(), half.clone(), half).unwrap();
    MaliciousAliceOptimum {
        t_a: best_t,
        p_alter: best,
        p_a: p_a_closed(&config),
        p_b: p_b_closed(&config),
    }
}

/// One sample of the malicious-Bob knowledge surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub t_b0: f64,
    pub t_b1: f64,
    pub p_b: f64,
}

/// Result of the malicious-Bob grid search (Alice honest at 1/2).
#[derive(Debug, Clone, PartialEq)]
pub struct MaliciousBobOptimum {
    pub t_b0: f64,
    pub t_b1: f64,
    pub p_b_max: f64,
    pub surface: Vec<SurfacePoint>,
}

/// Evaluate Bob's knowledge probability over a (t_B0, t_B1) grid and return
/// the argmax together with the full surface.
pub fn optimize_malicious_bob(grid_resolution: usize) -> Result<MaliciousBobOptimum> {
    if grid_resolution < 101 {
        return Err(Error::GridTooCoarse(grid_resolution, 101));
    }
    let steps = grid_resolution - 1;
    let surface: Vec<SurfacePoint> = (0..grid_resolution)
        .into_par_iter()
        .flat_map_iter(|i| {
            let t_b0 = i as f64 / steps as f64;
            (0..grid_resolution).map(move |j| {
                let t_b1 = j as f64 / steps as f64;
                let config = SplitterConfig::new(0.5, t_b0, t_b1)
                    .expect("grid points lie in [0, 1]");
                SurfacePoint {
                    t_b0,
                    t_b1,
                    p_b: p_b_closed(&config),
                }
            })
        })
        .collect();

    let best = surface
        .iter()
        .copied()
        .reduce(|a, b| if b.p_b > a.p_b { b } else { a })
        .expect("surface is nonempty");

    Ok(MaliciousBobOptimum {
        t_b0: best.t_b0,
        t_b1: best.t_b1,
        p_b_max: best.p_b,
        surface,
    })
}

/// Which party's source stays dark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoPhotonScenario {
    BobNone,
    AliceNone,
}

/// Per-slot rates of a no-photon scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRates<T> {
    pub p_a: T,
    pub p_b: T,
    pub p_alter: T,
}

/// Per-slot knowledge/confirmation rates when one source is dark.
///
/// Bob-none: only Alice's photon circulates; Bob reads its polarization
/// whenever it reaches one of his detectors, and Alice's empty-site event is
/// that same crossing. Alice-none: Bob treats the zero-detection and `DB1`
/// cases as equal bits; Alice is confirmed only when she catches his photon.
pub fn no_photon_rates<T: Scalar>(
    scenario: NoPhotonScenario,
    config: &SplitterConfig<T>,
) -> Result<ScenarioRates<T>> {
    let rates = match scenario {
        NoPhotonScenario::BobNone => {
            let dist = per_photon_distribution(PhotonSource::AlicePhoton, true, config);
            let crossing = dist.get(DetectorId::DB0) + dist.get(DetectorId::DB1);
            ScenarioRates {
                p_a: crossing.clone(),
                p_b: crossing,
                p_alter: T::one(),
            }
        }
        NoPhotonScenario::AliceNone => {
            let dist = per_photon_distribution(PhotonSource::BobPhoton, true, config);
            let caught_by_alice =
                dist.get(DetectorId::D0) + dist.get(DetectorId::D1) + dist.get(DetectorId::D2);
            let p_a = T::half() * caught_by_alice.clone();
            let p_b = T::half() * (caught_by_alice + dist.get(DetectorId::DB1));
            let p_alter = alter_ratio(p_a.clone(), p_b.clone())?;
            ScenarioRates { p_a, p_b, p_alter }
        }
    };
    Ok(rates)
}

/// Full security quantities for a no-photon scenario at given (m, n).
pub fn no_photon_quantities<T: Scalar>(
    scenario: NoPhotonScenario,
    config: &SplitterConfig<T>,
    params: SecurityParams,
) -> Result<SecurityQuantities<T>> {
    let rates = no_photon_rates(scenario, config)?;
    let bounds = concealing_bounds(params.m, params.n, &rates.p_b);
    Ok(SecurityQuantities {
        p_a: rates.p_a,
        p_b: rates.p_b,
        p_alter: rates.p_alter,
        epsilon: bounds.epsilon,
        bob_advantage: bounds.advantage,
    })
}

/// Necessary channel condition: 0 <= P_A < P_B < 1.
pub fn qbc_channel_check<T: Scalar>(p_a: &T, p_b: &T) -> bool {
    *p_a >= T::zero() && p_a < p_b && *p_b < T::one()
}

/// A planned parameter pair with the worst-case rates it was sized against.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPlan {
    pub params: SecurityParams,
    pub targets: SecurityTargets,
    /// Alter ratio of the optimal malicious Alice (t_A = 0).
    pub worst_p_alter: Rat,
    /// Knowledge rate of the optimal malicious Bob (t_B0 = 0, t_B1 = 1).
    pub worst_p_b: Rat,
    pub assumptions: Vec<String>,
}

/// Choose (m, n) so that both thresholds hold against each side's optimal
/// splitter choice, composing the two worst cases even though the two
/// adversaries cannot coexist.
pub fn plan_parameters(targets: &SecurityTargets) -> Result<ParameterPlan> {
    let alice_opt = optimize_malicious_alice();
    let m = binding_min_m(&targets.alpha, &alice_opt.p_alter)?;

    // Bob's optimum from the grid search, then evaluated exactly.
    let bob_opt = optimize_malicious_bob(201)?;
    let worst_config = SplitterConfig::new(
        rat(1, 2),
        crate::numeric::parse_rational(&format!("{}", bob_opt.t_b0)).unwrap(),
        crate::numeric::parse_rational(&format!("{}", bob_opt.t_b1)).unwrap(),
    )?;
    let worst_p_b = p_b_closed(&worst_config);
    let n = concealing_min_n(&targets.beta, m, &worst_p_b)?;

    // The no-photon strategies must not beat the splitter optima.
    let honest = SplitterConfig::<Rat>::honest();
    let bob_none = no_photon_rates(NoPhotonScenario::BobNone, &honest)?;
    let alice_none = no_photon_rates(NoPhotonScenario::AliceNone, &honest)?;
    debug_assert!(alice_none.p_alter <= alice_opt.p_alter);
    debug_assert!(bob_none.p_b <= worst_p_b && alice_none.p_b <= worst_p_b);

    let assumptions = vec![
        format!(
            "binding sized against the optimal malicious Alice: t_A = {}, P(Aalter) = {}",
            alice_opt.t_a, alice_opt.p_alter
        ),
        format!(
            "concealing sized against the optimal malicious Bob: (t_B0, t_B1) = ({}, {}), P_B = {}",
            bob_opt.t_b0, bob_opt.t_b1, worst_p_b
        ),
        format!(
            "no-photon senders are dominated: P_B(Bob none) = {}, P_B(Alice none) = {}, P(Aalter | Alice none) = {}",
            bob_none.p_b, alice_none.p_b, alice_none.p_alter
        ),
    ];

    Ok(ParameterPlan {
        params: SecurityParams::new(m, n)?,
        targets: targets.clone(),
        worst_p_alter: alice_opt.p_alter,
        worst_p_b,
        assumptions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;

    fn honest() -> SplitterConfig<Rat> {
        SplitterConfig::honest()
    }

    fn config(t_a: Rat, t_b0: Rat, t_b1: Rat) -> SplitterConfig<Rat> {
        SplitterConfig::new(t_a, t_b0, t_b1).unwrap()
    }

    #[test]
    fn honest_closed_forms() {
        assert_eq!(p_a_closed(&honest()), rat(17, 64));
        assert_eq!(p_b_closed(&honest()), rat(53, 128));
    }

    #[test]
    fn closed_forms_are_linear_on_the_malicious_alice_line() {
        for k in 0..=16 {
            let t_a = rat(k, 16);
            let c = config(t_a.clone(), rat(1, 2), rat(1, 2));
            assert_eq!(p_a_closed(&c), rat(5, 32) * t_a.clone() + rat(3, 16));
            assert_eq!(p_b_closed(&c), rat(9, 64) * t_a + rat(11, 32));
        }
    }

    #[test]
    fn fully_reflecting_inner_splitter_collapses_both_rates() {
        // At t_B1 = 0 every slot ends as either a lone DB0 click or a
        // double click at Bob, so P_A = P_B = t_A t_B0 r_B0.
        for a in 0..=8 {
            for b0 in 0..=8 {
                let c = config(rat(a, 8), rat(b0, 8), rat(0, 1));
                let expected = rat(a, 8) * rat(b0, 8) * rat(8 - b0, 8);
                assert_eq!(p_a_closed(&c), expected);
                assert_eq!(p_b_closed(&c), expected);
                assert_eq!(p_a_enum(&c), expected);
            }
        }
    }

    #[test]
    fn closed_forms_match_enumeration_exactly() {
        for a in 0..=6 {
            for b0 in 0..=6 {
                for b1 in 0..=6 {
                    let c = config(rat(a, 6), rat(b0, 6), rat(b1, 6));
                    assert_eq!(p_a_closed(&c), p_a_enum(&c), "P_A at {a}/{b0}/{b1}");
                    assert_eq!(p_b_closed(&c), p_b_enum(&c), "P_B at {a}/{b0}/{b1}");
                }
            }
        }
    }

    #[test]
    fn knowledge_gap_factors_and_vanishes_only_at_inner_extremes() {
        for a in 0..=6 {
            for b0 in 0..=6 {
                for b1 in 0..=6 {
                    let c = config(rat(a, 6), rat(b0, 6), rat(b1, 6));
                    let gap = p_b_closed(&c) - p_a_closed(&c);
                    let t_b1 = rat(b1, 6);
                    let expected = rat(1, 2)
                        * t_b1.clone()
                        * (Rat::one() - t_b1.clone())
                        * (Rat::one() + rat(b0, 6) * rat(b0, 6)
                            - rat(2, 1) * rat(a, 6) * rat(6 - b0, 6) * pow(&rat(b0, 6), 3));
                    assert_eq!(gap, expected);
                    assert_eq!(gap == Rat::zero(), b1 == 0 || b1 == 6);
                    assert!(gap >= Rat::zero());
                }
            }
        }
    }

    #[test]
    fn alter_ratio_values() {
        assert_eq!(p_alter(&honest()).unwrap(), rat(75, 94));
        let alice_zero = config(rat(0, 1), rat(1, 2), rat(1, 2));
        assert_eq!(p_alter(&alice_zero).unwrap(), rat(21, 26));
        // (42 - 9 t) / (52 - 10 t) along the malicious-Alice line.
        for k in 0..=10 {
            let t = rat(k, 10);
            let c = config(t.clone(), rat(1, 2), rat(1, 2));
            let expected = (rat(42, 1) - rat(9, 1) * t.clone()) / (rat(52, 1) - rat(10, 1) * t);
            assert_eq!(p_alter(&c).unwrap(), expected);
        }
    }

    #[test]
    fn security_quantities_reject_certain_confirmation() {
        let err = security_quantities(Rat::one(), rat(1, 2), SecurityParams::new(1, 1).unwrap());
        assert!(matches!(err, Err(Error::UndefinedAlterRatio)));
    }

    #[test]
    fn binding_thresholds() {
        let alpha = rat(1, 1_000_000);
        assert_eq!(binding_min_m(&alpha, &rat(21, 26)).unwrap(), 65);
        assert_eq!(binding_min_m(&alpha, &rat(75, 94)).unwrap(), 62);
        assert_eq!(binding_min_m(&rat(1, 2), &rat(1, 2)).unwrap(), 2);
        // Exact-integer landing takes the next integer (strict inequality).
        assert_eq!(binding_min_m(&rat(1, 4), &rat(1, 2)).unwrap(), 3);
        // Near-vacuous threshold needs a single sequence.
        assert_eq!(binding_min_m(&rat(99, 100), &rat(21, 26)).unwrap(), 1);
        assert!(binding_min_m(&alpha, &rat(1, 1)).is_err());
        assert!(binding_min_m(&rat(2, 1), &rat(1, 2)).is_err());
    }

    #[test]
    fn binding_minimality_bracketing() {
        let alpha = rat(1, 1_000_000);
        for p in [rat(21, 26), rat(75, 94), rat(3, 5)] {
            let m = binding_min_m(&alpha, &p).unwrap();
            assert!(pow(&p, m) < alpha);
            assert!(pow(&p, m - 1) >= alpha || m == 1);
        }
    }

    #[test]
    fn concealing_bounds_values() {
        let b = concealing_bounds(65, 25, &rat(1, 2));
        assert!(b.advantage < rat(1, 1_000_000));
        assert!(b.advantage > rat(9, 10_000_000));
        assert_eq!(b.p_bknows, rat(1, 2) + b.advantage.clone());
        assert_eq!(concealing_advantage(3, 7, &rat(0, 1)), rat(0, 1));
        assert_eq!(concealing_advantage(1, 1, &rat(1, 1)), rat(1, 2));
    }

    #[test]
    fn concealing_thresholds() {
        let beta = rat(1, 1_000_000);
        assert_eq!(concealing_min_n(&beta, 65, &rat(1, 2)).unwrap(), 25);
        // Honest-rate sizing, checked by its own bracketing.
        let n = concealing_min_n(&beta, 65, &rat(53, 128)).unwrap();
        assert_eq!(n, 20);
        assert!(concealing_advantage(65, n, &rat(53, 128)) < beta);
        assert!(concealing_advantage(65, n - 1, &rat(53, 128)) >= beta);
        assert!(concealing_min_n(&beta, 65, &rat(0, 1)).is_err());
        assert!(concealing_min_n(&beta, 65, &rat(1, 1)).is_err());
        assert!(concealing_min_n(&rat(3, 4), 65, &rat(1, 2)).is_err());
    }

    #[test]
    fn advantage_monotone_in_m_and_n() {
        let p = rat(53, 128);
        for n in 1..20 {
            assert!(concealing_advantage(5, n + 1, &p) <= concealing_advantage(5, n, &p));
        }
        for m in 1..20 {
            assert!(concealing_advantage(m + 1, 5, &p) >= concealing_advantage(m, 5, &p));
        }
    }

    #[test]
    fn threshold_search_is_log_base_invariant() {
        // Both thresholds are ratios of logarithms; natural and base-2
        // estimates bracket the same integer the exact search returns.
        let alpha = 1e-6_f64;
        let p = 21.0 / 26.0;
        let ln_ratio = alpha.ln() / p.ln();
        let log2_ratio = alpha.log2() / p.log2();
        assert!((ln_ratio - log2_ratio).abs() < 1e-9);
        let m = binding_min_m(&rat(1, 1_000_000), &rat(21, 26)).unwrap();
        assert_eq!(m as f64, ln_ratio.floor() + 1.0);
    }

    #[test]
    fn malicious_alice_optimum() {
        let opt = optimize_malicious_alice();
        assert_eq!(opt.t_a, rat(0, 1));
        assert_eq!(opt.p_alter, rat(21, 26));
        assert_eq!(opt.p_a, rat(3, 16));
        assert_eq!(opt.p_b, rat(11, 32));
        // Endpoint comparison confirming t_A = 0 dominates t_A = 1.
        let at_one = p_alter(&config(rat(1, 1), rat(1, 2), rat(1, 2))).unwrap();
        assert_eq!(at_one, rat(33, 42));
        assert!(at_one < opt.p_alter);
    }

    #[test]
    fn malicious_bob_optimum() {
        let opt = optimize_malicious_bob(101).unwrap();
        assert_eq!((opt.t_b0, opt.t_b1), (0.0, 1.0));
        assert_eq!(opt.p_b_max, 0.5);
        let honest_cell = opt
            .surface
            .iter()
            .find(|p| p.t_b0 == 0.5 && p.t_b1 == 0.5)
            .unwrap();
        assert_eq!(honest_cell.p_b, 53.0 / 128.0);
        // Fully reflecting inner splitter leaves only the double-click case.
        for p in opt.surface.iter().filter(|p| p.t_b1 == 0.0) {
            let expected = 0.5 * 0.5 * p.t_b0 * (1.0 - p.t_b0);
            assert!((p.p_b - expected).abs() < 1e-15);
        }
        assert!(optimize_malicious_bob(50).is_err());
    }

    #[test]
    fn no_photon_scenario_rates() {
        let rates = no_photon_rates(NoPhotonScenario::BobNone, &honest()).unwrap();
        assert_eq!(rates.p_b, rat(1, 8));
        assert_eq!(rates.p_a, rat(1, 8));

        let rates = no_photon_rates(NoPhotonScenario::AliceNone, &honest()).unwrap();
        assert_eq!(rates.p_b, rat(11, 32));
        assert_eq!(rates.p_a, rat(3, 16));
        assert_eq!(rates.p_alter, rat(21, 26));

        // The Alice-none rates do not depend on Alice's own splitter.
        for k in 0..=4 {
            let c = config(rat(k, 4), rat(1, 2), rat(1, 2));
            let r = no_photon_rates(NoPhotonScenario::AliceNone, &c).unwrap();
            assert_eq!(r.p_b, rat(11, 32));
            assert_eq!(r.p_a, rat(3, 16));
        }
    }

    #[test]
    fn channel_condition() {
        assert!(qbc_channel_check(&rat(17, 64), &rat(53, 128)));
        assert!(!qbc_channel_check(&rat(1, 2), &rat(1, 2)));
        assert!(!qbc_channel_check(&rat(0, 1), &rat(1, 1)));
    }

    #[test]
    fn planner_reproduces_the_reference_parameters() {
        let targets = SecurityTargets::new(
            parse_rational("1e-6").unwrap(),
            parse_rational("1e-6").unwrap(),
        )
        .unwrap();
        let plan = plan_parameters(&targets).unwrap();
        assert_eq!(plan.params, SecurityParams { m: 65, n: 25 });
        assert_eq!(plan.worst_p_alter, rat(21, 26));
        assert_eq!(plan.worst_p_b, rat(1, 2));
        // Minimality: one fewer sequence or slot violates its threshold.
        assert!(pow(&plan.worst_p_alter, 64) >= targets.alpha);
        assert!(concealing_advantage(65, 24, &plan.worst_p_b) >= targets.beta);
    }

    #[test]
    fn planner_handles_loose_and_tight_targets() {
        let targets = SecurityTargets::new(
            parse_rational("1e-3").unwrap(),
            parse_rational("1e-3").unwrap(),
        )
        .unwrap();
        let plan = plan_parameters(&targets).unwrap();
        assert_eq!(plan.params.m, 33);
        let n = plan.params.n;
        assert!(concealing_advantage(33, n, &rat(1, 2)) < targets.beta);
        assert!(n == 1 || concealing_advantage(33, n - 1, &rat(1, 2)) >= targets.beta);

        let vacuous = SecurityTargets::new(rat(99, 100), parse_rational("1e-6").unwrap()).unwrap();
        assert_eq!(plan_parameters(&vacuous).unwrap().params.m, 1);
    }
}
