//! Joint two-photon model of a single protocol time slot.
//!
//! Routing of the two photons is independent given the bit-equality of the
//! slot, so joint outcome probabilities are products of the per-photon
//! marginals under a uniform equality prior. Knowledge classification assumes
//! lossless channels and ideal counting/polarization detectors.

use crate::numeric::Scalar;
use crate::optics::{
    per_photon_distribution, DetectorId, PhotonSource, SenderMode, SplitterConfig,
};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Joint routing result of one time slot.
///
/// `bits_equal` is `None` exactly when Bob sent no photon (he then has no bit
/// for the slot); Alice keeps choosing bits even when she sends nothing,
/// because her switch timing still shapes Bob's photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RoundOutcome {
    pub bits_equal: Option<bool>,
    pub alice_photon_at: Option<DetectorId>,
    pub bob_photon_at: Option<DetectorId>,
}

impl RoundOutcome {
    pub fn count_at(&self, detector: DetectorId) -> u8 {
        let mut count = 0;
        if self.alice_photon_at == Some(detector) {
            count += 1;
        }
        if self.bob_photon_at == Some(detector) {
            count += 1;
        }
        count
    }

    /// Photons at Alice's detectors `D0`, `D1`, `D2`.
    pub fn alice_site_count(&self) -> u8 {
        [DetectorId::D0, DetectorId::D1, DetectorId::D2]
            .iter()
            .map(|&d| self.count_at(d))
            .sum()
    }

    /// Photons at Bob's detectors `DB0`, `DB1`.
    pub fn bob_site_count(&self) -> u8 {
        self.count_at(DetectorId::DB0) + self.count_at(DetectorId::DB1)
    }

    pub fn photons_sent(&self) -> u8 {
        self.alice_photon_at.is_some() as u8 + self.bob_photon_at.is_some() as u8
    }
}

/// What Bob can infer about Alice's slot bit from his own detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BobKnowledge {
    KnowsBit(bool),
    Unknown,
}

/// Whether Alice can confirm that Bob learned her slot bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AliceKnowledge {
    BobKnows,
    Uncertain,
}

/// Bob's inference rules for a slot in which he sent a photon.
///
/// * Nothing at his site: both photons went to Alice, which only happens when
///   the bits are equal.
/// * `DB1` clicks while `DB0` stays silent: differing bits would have parked
///   his photon in `DB0`, so the bits are equal.
/// * Two photons at his site with `DB0` involved: the polarization pair is
///   equal exactly when the bits are, and his own bit anchors the comparison.
/// * A lone `DB0` click: its polarization always matches his own bit, so it
///   carries no information.
pub fn classify_bob(outcome: &RoundOutcome, bob_bit: bool) -> BobKnowledge {
    let db0 = outcome.count_at(DetectorId::DB0);
    let db1 = outcome.count_at(DetectorId::DB1);
    match (db0, db1) {
        (0, 0) => BobKnowledge::KnowsBit(bob_bit),
        (0, _) => BobKnowledge::KnowsBit(bob_bit),
        (1, 0) => BobKnowledge::Unknown,
        _ => {
            // Two photons at Bob's site; their polarizations are equal iff
            // the bits are.
            let equal = outcome
                .bits_equal
                .expect("two-photon slot implies both parties chose bits");
            BobKnowledge::KnowsBit(if equal { bob_bit } else { !bob_bit })
        }
    }
}

/// Alice confirms Bob learned her bit exactly when her detectors caught 0 or
/// 2 photons: either both photons sit at Bob's site or both came back to her.
pub fn classify_alice(outcome: &RoundOutcome) -> AliceKnowledge {
    match outcome.alice_site_count() {
        0 | 2 => AliceKnowledge::BobKnows,
        _ => AliceKnowledge::Uncertain,
    }
}

/// Inference for a Bob who sent no photon: any photon reaching his detectors
/// is Alice's, and its polarization reads out her bit directly.
pub fn classify_bob_no_photon_sender(outcome: &RoundOutcome, alice_bit: bool) -> BobKnowledge {
    if outcome.bob_site_count() > 0 {
        BobKnowledge::KnowsBit(alice_bit)
    } else {
        BobKnowledge::Unknown
    }
}

/// Confirmation rule for an Alice who sent no photon: only when her detectors
/// catch Bob's photon does she know Bob saw nothing and concluded the bits
/// were equal.
pub fn classify_alice_no_photon_sender(outcome: &RoundOutcome) -> AliceKnowledge {
    if outcome.alice_site_count() == 1 {
        AliceKnowledge::BobKnows
    } else {
        AliceKnowledge::Uncertain
    }
}

/// Full distribution over round outcomes for one slot.
#[derive(Debug, Clone)]
pub struct JointDistribution<T> {
    atoms: Vec<(RoundOutcome, T)>,
}

impl<T: Scalar> JointDistribution<T> {
    pub fn atoms(&self) -> &[(RoundOutcome, T)] {
        &self.atoms
    }

    pub fn total(&self) -> T {
        self.atoms
            .iter()
            .fold(T::zero(), |acc, (_, p)| acc + p.clone())
    }

    /// Probability mass of outcomes satisfying `predicate`.
    pub fn probability_of(&self, predicate: impl Fn(&RoundOutcome) -> bool) -> T {
        self.atoms
            .iter()
            .filter(|(o, _)| predicate(o))
            .fold(T::zero(), |acc, (_, p)| acc + p.clone())
    }

    /// P(Alice confirms Bob knows), honest classification.
    pub fn p_alice_confirms(&self) -> T {
        self.probability_of(|o| classify_alice(o) == AliceKnowledge::BobKnows)
    }

    /// P(Bob learns Alice's bit), honest classification. The knowledge /
    /// no-knowledge split does not depend on the actual bit values.
    pub fn p_bob_knows(&self) -> T {
        self.probability_of(|o| classify_bob(o, false) != BobKnowledge::Unknown)
    }

    /// Marginal of one photon's landing spot conditioned on bit equality;
    /// recovers the per-photon table.
    pub fn conditional_marginal(
        &self,
        source: PhotonSource,
        bits_equal: bool,
    ) -> Vec<(DetectorId, T)> {
        let prior = self.probability_of(|o| o.bits_equal == Some(bits_equal));
        DetectorId::ALL
            .iter()
            .map(|&d| {
                let mass = self.probability_of(|o| {
                    o.bits_equal == Some(bits_equal)
                        && match source {
                            PhotonSource::AlicePhoton => o.alice_photon_at == Some(d),
                            PhotonSource::BobPhoton => o.bob_photon_at == Some(d),
                        }
                });
                (d, mass / prior.clone())
            })
            .collect()
    }
}

/// Enumerate the joint distribution for one slot under the given sender
/// modes. Outcome probabilities are `1/2 * P(alice photon at d1 | equality) *
/// P(bob photon at d2 | equality)` summed over the equality prior; a dark
/// source drops its factor (and, for Bob, the equality coordinate).
pub fn joint_distribution<T: Scalar>(
    config: &SplitterConfig<T>,
    alice_mode: SenderMode,
    bob_mode: SenderMode,
) -> JointDistribution<T> {
    let mut atoms = Vec::new();
    match (alice_mode, bob_mode) {
        (SenderMode::SinglePhoton, SenderMode::SinglePhoton) => {
            for bits_equal in [false, true] {
                let alice = per_photon_distribution(PhotonSource::AlicePhoton, bits_equal, config);
                let bob = per_photon_distribution(PhotonSource::BobPhoton, bits_equal, config);
                for (d_a, p_a) in alice.iter() {
                    if p_a == T::zero() {
                        continue;
                    }
                    for (d_b, p_b) in bob.iter() {
                        if p_b == T::zero() {
                            continue;
                        }
                        atoms.push((
                            RoundOutcome {
                                bits_equal: Some(bits_equal),
                                alice_photon_at: Some(d_a),
                                bob_photon_at: Some(d_b),
                            },
                            T::half() * p_a.clone() * p_b,
                        ));
                    }
                }
            }
        }
        (SenderMode::NoPhoton, SenderMode::SinglePhoton) => {
            for bits_equal in [false, true] {
                let bob = per_photon_distribution(PhotonSource::BobPhoton, bits_equal, config);
                for (d_b, p_b) in bob.iter() {
                    if p_b == T::zero() {
                        continue;
                    }
                    atoms.push((
                        RoundOutcome {
                            bits_equal: Some(bits_equal),
                            alice_photon_at: None,
                            bob_photon_at: Some(d_b),
                        },
                        T::half() * p_b,
                    ));
                }
            }
        }
        (SenderMode::SinglePhoton, SenderMode::NoPhoton) => {
            // Bob chose no bit; Alice's photon routes identically either way.
            let alice = per_photon_distribution(PhotonSource::AlicePhoton, true, config);
            for (d_a, p_a) in alice.iter() {
                if p_a == T::zero() {
                    continue;
                }
                atoms.push((
                    RoundOutcome {
                        bits_equal: None,
                        alice_photon_at: Some(d_a),
                        bob_photon_at: None,
                    },
                    p_a,
                ));
            }
        }
        (SenderMode::NoPhoton, SenderMode::NoPhoton) => {
            atoms.push((
                RoundOutcome {
                    bits_equal: None,
                    alice_photon_at: None,
                    bob_photon_at: None,
                },
                T::one(),
            ));
        }
    }
    JointDistribution { atoms }
}

/// Cumulative per-photon tables for fast repeated sampling of one
/// configuration.
#[derive(Debug, Clone)]
pub struct RoundSampler {
    alice_mode: SenderMode,
    bob_mode: SenderMode,
    alice_cdf: [f64; 5],
    bob_eq_cdf: [f64; 5],
}

impl RoundSampler {
    pub fn new(config: &SplitterConfig<f64>, alice_mode: SenderMode, bob_mode: SenderMode) -> Self {
        let alice = per_photon_distribution(PhotonSource::AlicePhoton, true, config);
        let bob_eq = per_photon_distribution(PhotonSource::BobPhoton, true, config);
        Self {
            alice_mode,
            bob_mode,
            alice_cdf: cumulative(&alice),
            bob_eq_cdf: cumulative(&bob_eq),
        }
    }

    /// Sample one slot conditioned on the actual bit pair.
    ///
    /// `bits_equal` must be `Some` whenever Bob sends a photon and is ignored
    /// (use `None`) when he does not.
    pub fn sample(&self, bits_equal: Option<bool>, rng: &mut impl Rng) -> RoundOutcome {
        let alice_photon_at = match self.alice_mode {
            SenderMode::SinglePhoton => Some(draw(&self.alice_cdf, rng)),
            SenderMode::NoPhoton => None,
        };
        let (bits_equal, bob_photon_at) = match self.bob_mode {
            SenderMode::SinglePhoton => {
                let equal = bits_equal.expect("bit equality required when Bob sends a photon");
                let detector = if equal {
                    draw(&self.bob_eq_cdf, rng)
                } else {
                    DetectorId::DB0
                };
                (Some(equal), Some(detector))
            }
            SenderMode::NoPhoton => (None, None),
        };
        RoundOutcome {
            bits_equal,
            alice_photon_at,
            bob_photon_at,
        }
    }
}

/// One-shot sampling of a slot given both parties' bits and modes.
pub fn sample_round(
    config: &SplitterConfig<f64>,
    alice_bit: bool,
    bob_bit: bool,
    alice_mode: SenderMode,
    bob_mode: SenderMode,
    rng: &mut impl Rng,
) -> RoundOutcome {
    let sampler = RoundSampler::new(config, alice_mode, bob_mode);
    let bits_equal = match bob_mode {
        SenderMode::SinglePhoton => Some(alice_bit == bob_bit),
        SenderMode::NoPhoton => None,
    };
    sampler.sample(bits_equal, rng)
}

fn cumulative(dist: &crate::optics::DetectorDistribution<f64>) -> [f64; 5] {
    let mut cdf = [0.0; 5];
    let mut acc = 0.0;
    for (i, (_, p)) in dist.iter().enumerate() {
        acc += p;
        cdf[i] = acc;
    }
    cdf
}

fn draw(cdf: &[f64; 5], rng: &mut impl Rng) -> DetectorId {
    let u: f64 = rng.random::<f64>() * cdf[4];
    for (i, &threshold) in cdf.iter().enumerate() {
        if u < threshold {
            return DetectorId::ALL[i];
        }
    }
    DetectorId::ALL[4]
}
