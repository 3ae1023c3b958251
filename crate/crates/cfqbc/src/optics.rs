//! Probability-level model of the two-party interferometer network.
//!
//! Each photon is routed through three beam splitters; the model is a fixed
//! catalog of optical paths whose probabilities are products of transmit and
//! reflect coefficients. Interference shows up as a single deterministic rule:
//! when the parties' bits differ, the photon sent by Bob returns to detector
//! `D_B0` with probability 1. Phases are never tracked.

use crate::error::{Error, Result};
use crate::numeric::{format_rational, Rat, Scalar};
use serde::{Deserialize, Serialize};
use std::fmt;

/// One of the three beam splitters in the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Splitter {
    /// Alice's splitter `BS_A`.
    A,
    /// Bob's outer splitter `BS_B0`.
    B0,
    /// Bob's inner splitter `BS_B1`.
    B1,
}

/// A named path coefficient: transmission or reflection at one splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficient {
    Transmit(Splitter),
    Reflect(Splitter),
}

impl Coefficient {
    pub fn evaluate<T: Scalar>(self, config: &SplitterConfig<T>) -> T {
        match self {
            Coefficient::Transmit(Splitter::A) => config.t_a.clone(),
            Coefficient::Transmit(Splitter::B0) => config.t_b0.clone(),
            Coefficient::Transmit(Splitter::B1) => config.t_b1.clone(),
            Coefficient::Reflect(Splitter::A) => config.r_a(),
            Coefficient::Reflect(Splitter::B0) => config.r_b0(),
            Coefficient::Reflect(Splitter::B1) => config.r_b1(),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, splitter) = match self {
            Coefficient::Transmit(s) => ("t", s),
            Coefficient::Reflect(s) => ("r", s),
        };
        let suffix = match splitter {
            Splitter::A => "A",
            Splitter::B0 => "B0",
            Splitter::B1 => "B1",
        };
        write!(f, "{kind}_{suffix}")
    }
}

/// The three transmissivities defining the optical network.
///
/// Reflectivities are always derived (`r = 1 - t`), never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitterConfig<T> {
    t_a: T,
    t_b0: T,
    t_b1: T,
}

impl<T: Scalar> SplitterConfig<T> {
    pub fn new(t_a: T, t_b0: T, t_b1: T) -> Result<Self> {
        for (name, value) in [("t_A", &t_a), ("t_B0", &t_b0), ("t_B1", &t_b1)] {
            if !value.is_probability() {
                return Err(Error::InvalidTransmissivity {
                    name,
                    value: value.to_f64(),
                });
            }
        }
        Ok(Self { t_a, t_b0, t_b1 })
    }

    /// All three splitters half transparent, half reflecting.
    pub fn honest() -> Self {
        Self {
            t_a: T::half(),
            t_b0: T::half(),
            t_b1: T::half(),
        }
    }

    pub fn t_a(&self) -> T {
        self.t_a.clone()
    }

    pub fn t_b0(&self) -> T {
        self.t_b0.clone()
    }

    pub fn t_b1(&self) -> T {
        self.t_b1.clone()
    }

    pub fn r_a(&self) -> T {
        self.t_a.complement()
    }

    pub fn r_b0(&self) -> T {
        self.t_b0.complement()
    }

    pub fn r_b1(&self) -> T {
        self.t_b1.complement()
    }

    pub fn to_f64(&self) -> SplitterConfig<f64> {
        SplitterConfig {
            t_a: self.t_a.to_f64(),
            t_b0: self.t_b0.to_f64(),
            t_b1: self.t_b1.to_f64(),
        }
    }
}

/// The five detectors. `D0..D2` sit at Alice's site, `DB0`/`DB1` at Bob's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DetectorId {
    D0,
    D1,
    D2,
    DB0,
    DB1,
}

impl DetectorId {
    pub const ALL: [DetectorId; 5] = [
        DetectorId::D0,
        DetectorId::D1,
        DetectorId::D2,
        DetectorId::DB0,
        DetectorId::DB1,
    ];

    pub fn is_alice_side(self) -> bool {
        matches!(self, DetectorId::D0 | DetectorId::D1 | DetectorId::D2)
    }

    pub fn is_bob_side(self) -> bool {
        !self.is_alice_side()
    }

    fn index(self) -> usize {
        match self {
            DetectorId::D0 => 0,
            DetectorId::D1 => 1,
            DetectorId::D2 => 2,
            DetectorId::DB0 => 3,
            DetectorId::DB1 => 4,
        }
    }
}

impl fmt::Display for DetectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            DetectorId::D0 => "D0",
            DetectorId::D1 => "D1",
            DetectorId::D2 => "D2",
            DetectorId::DB0 => "DB0",
            DetectorId::DB1 => "DB1",
        };
        f.write_str(name)
    }
}

/// Photon polarization; bit 0 encodes as `H`, bit 1 as `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Polarization::V
        } else {
            Polarization::H
        }
    }

    pub fn to_bit(self) -> bool {
        self == Polarization::V
    }
}

/// Which party's source emitted a photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhotonSource {
    AlicePhoton,
    BobPhoton,
}

/// What a party's source does each round. Multi-photon emission is not
/// representable; the protocol treats it as detectable and rejects it at
/// configuration time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SenderMode {
    SinglePhoton,
    NoPhoton,
}

/// Probability assigned to each of the five detectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorDistribution<T> {
    entries: [T; 5],
}

impl<T: Scalar> DetectorDistribution<T> {
    pub fn get(&self, detector: DetectorId) -> T {
        self.entries[detector.index()].clone()
    }

    pub fn sum(&self) -> T {
        self.entries
            .iter()
            .cloned()
            .fold(T::zero(), |acc, p| acc + p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (DetectorId, T)> + '_ {
        DetectorId::ALL.iter().map(|&d| (d, self.get(d)))
    }

    fn from_fn(mut f: impl FnMut(DetectorId) -> T) -> Self {
        Self {
            entries: [
                f(DetectorId::D0),
                f(DetectorId::D1),
                f(DetectorId::D2),
                f(DetectorId::DB0),
                f(DetectorId::DB1),
            ],
        }
    }
}

/// One enumerated optical path: which photon, which bit-equality case, where
/// it lands, and the named coefficients picked up along the way.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathRecord {
    pub source: PhotonSource,
    pub bits_equal: bool,
    pub detector: DetectorId,
    pub factors: Vec<Coefficient>,
    pub route: String,
}

impl PathRecord {
    /// Product of the named coefficients; the empty product is 1 (the
    /// interference path).
    pub fn probability<T: Scalar>(&self, config: &SplitterConfig<T>) -> T {
        self.factors
            .iter()
            .map(|c| c.evaluate(config))
            .fold(T::one(), |acc, p| acc * p)
    }

    /// Symbolic product such as `t_A r_B0^2`, or `1` for the interference path.
    pub fn expression(&self) -> String {
        format_factor_product(&self.factors)
    }
}

use Coefficient::{Reflect, Transmit};
use Splitter::{A, B0, B1};

fn path(
    source: PhotonSource,
    bits_equal: bool,
    detector: DetectorId,
    factors: &[Coefficient],
    route: &str,
) -> PathRecord {
    PathRecord {
        source,
        bits_equal,
        detector,
        factors: factors.to_vec(),
        route: route.to_string(),
    }
}

/// Every optical path the fixed apparatus admits for one photon source and
/// one bit-equality case.
pub fn enumerate_paths(source: PhotonSource, bits_equal: bool) -> Vec<PathRecord> {
    match source {
        // Alice controls the switch according to her own state, so her photon
        // never interferes: the same five routes exist in both cases.
        PhotonSource::AlicePhoton => vec![
            path(
                source,
                bits_equal,
                DetectorId::D0,
                &[Reflect(A), Reflect(A)],
                "S_A -> C_0 -> BS_A -> FM_0 -> BS_A -> C_0 -> D_0",
            ),
            path(
                source,
                bits_equal,
                DetectorId::D0,
                &[Transmit(A), Reflect(B0), Reflect(B0), Transmit(A)],
                "S_A -> C_0 -> BS_A -> BS_B0 -> FM_2 -> BS_B0 -> BS_A -> C_0 -> D_0",
            ),
            path(
                source,
                bits_equal,
                DetectorId::D1,
                &[Reflect(A), Transmit(A)],
                "S_A -> C_0 -> BS_A -> FM_0 -> BS_A -> D_1",
            ),
            path(
                source,
                bits_equal,
                DetectorId::D1,
                &[Transmit(A), Reflect(B0), Reflect(B0), Reflect(A)],
                "S_A -> C_0 -> BS_A -> BS_B0 -> FM_2 -> BS_B0 -> BS_A -> D_1",
            ),
            path(
                source,
                bits_equal,
                DetectorId::D2,
                &[Transmit(A), Transmit(B0)],
                "S_A -> C_0 -> BS_A -> BS_B0 -> PBS -> D_2",
            ),
            path(
                source,
                bits_equal,
                DetectorId::DB0,
                &[Transmit(A), Reflect(B0), Transmit(B0), Transmit(B1)],
                "S_A -> C_0 -> BS_A -> BS_B0 -> FM_2 -> BS_B0 -> BS_B1 -> C_1 -> D_B0",
            ),
            path(
                source,
                bits_equal,
                DetectorId::DB1,
                &[Transmit(A), Reflect(B0), Transmit(B0), Reflect(B1)],
                "S_A -> C_0 -> BS_A -> BS_B0 -> FM_2 -> BS_B0 -> BS_B1 -> D_B1",
            ),
        ],
        PhotonSource::BobPhoton if !bits_equal => vec![
            // Differing bits close the interferometer: Bob's photon returns
            // to D_B0 with certainty.
            path(
                source,
                bits_equal,
                DetectorId::DB0,
                &[],
                "S_B -> C_1 -> BS_B1 -> interference -> C_1 -> D_B0",
            ),
        ],
        PhotonSource::BobPhoton => vec![
            path(
                source,
                bits_equal,
                DetectorId::D0,
                &[Transmit(B1), Transmit(B0), Reflect(B0), Transmit(A)],
                "S_B -> C_1 -> BS_B1 -> BS_B0 -> FM_2 -> BS_B0 -> BS_A -> C_0 -> D_0",
            ),
            path(
                source,
                bits_equal,
                DetectorId::D1,
                &[Transmit(B1), Transmit(B0), Reflect(B0), Reflect(A)],
                "S_B -> C_1 -> BS_B1 -> BS_B0 -> FM_2 -> BS_B0 -> BS_A -> D_1",
            ),
            path(
                source,
                bits_equal,
                DetectorId::D2,
                &[Transmit(B1), Reflect(B0)],
                "S_B -> C_1 -> BS_B1 -> BS_B0 -> PBS -> D_2",
            ),
            path(
                source,
                bits_equal,
                DetectorId::DB0,
                &[Transmit(B1), Transmit(B0), Transmit(B0), Transmit(B1)],
                "S_B -> C_1 -> BS_B1 -> BS_B0 -> FM_2 -> BS_B0 -> BS_B1 -> C_1 -> D_B0",
            ),
            path(
                source,
                bits_equal,
                DetectorId::DB0,
                &[Reflect(B1), Reflect(B1)],
                "S_B -> C_1 -> BS_B1 -> FM_3 -> BS_B1 -> C_1 -> D_B0",
            ),
            path(
                source,
                bits_equal,
                DetectorId::DB1,
                &[Transmit(B1), Transmit(B0), Transmit(B0), Reflect(B1)],
                "S_B -> C_1 -> BS_B1 -> BS_B0 -> FM_2 -> BS_B0 -> BS_B1 -> D_B1",
            ),
            path(
                source,
                bits_equal,
                DetectorId::DB1,
                &[Reflect(B1), Transmit(B1)],
                "S_B -> C_1 -> BS_B1 -> FM_3 -> BS_B1 -> D_B1",
            ),
        ],
    }
}

/// Detection probability of each detector for a single photon.
///
/// Written as the tabulated closed forms; `enumerate_paths` reproduces the
/// same distribution path-by-path and the tests hold the two together.
pub fn per_photon_distribution<T: Scalar>(
    source: PhotonSource,
    bits_equal: bool,
    config: &SplitterConfig<T>,
) -> DetectorDistribution<T> {
    let (t_a, r_a) = (config.t_a(), config.r_a());
    let (t_b0, r_b0) = (config.t_b0(), config.r_b0());
    let (t_b1, r_b1) = (config.t_b1(), config.r_b1());

    match source {
        PhotonSource::AlicePhoton => DetectorDistribution::from_fn(|d| match d {
            DetectorId::D0 => r_a.clone() * r_a.clone() + t_a.clone() * t_a.clone() * r_b0.clone() * r_b0.clone(),
            DetectorId::D1 => r_a.clone() * t_a.clone() + t_a.clone() * r_b0.clone() * r_b0.clone() * r_a.clone(),
            DetectorId::D2 => t_a.clone() * t_b0.clone(),
            DetectorId::DB0 => t_a.clone() * r_b0.clone() * t_b0.clone() * t_b1.clone(),
            DetectorId::DB1 => t_a.clone() * r_b0.clone() * t_b0.clone() * r_b1.clone(),
        }),
        PhotonSource::BobPhoton if !bits_equal => DetectorDistribution::from_fn(|d| {
            if d == DetectorId::DB0 {
                T::one()
            } else {
                T::zero()
            }
        }),
        PhotonSource::BobPhoton => DetectorDistribution::from_fn(|d| match d {
            DetectorId::D0 => t_b1.clone() * t_b0.clone() * r_b0.clone() * t_a.clone(),
            DetectorId::D1 => t_b1.clone() * t_b0.clone() * r_b0.clone() * r_a.clone(),
            DetectorId::D2 => t_b1.clone() * r_b0.clone(),
            DetectorId::DB0 => {
                t_b1.clone() * t_b1.clone() * t_b0.clone() * t_b0.clone() + r_b1.clone() * r_b1.clone()
            }
            DetectorId::DB1 => {
                t_b1.clone() * t_b0.clone() * t_b0.clone() * r_b1.clone() + r_b1.clone() * t_b1.clone()
            }
        }),
    }
}

/// Detector distribution when one source stays dark: exactly the remaining
/// photon's single-photon distribution.
pub fn no_photon_distribution<T: Scalar>(
    absent: PhotonSource,
    bits_equal: bool,
    config: &SplitterConfig<T>,
) -> DetectorDistribution<T> {
    let remaining = match absent {
        PhotonSource::AlicePhoton => PhotonSource::BobPhoton,
        PhotonSource::BobPhoton => PhotonSource::AlicePhoton,
    };
    per_photon_distribution(remaining, bits_equal, config)
}

fn format_factor_product(factors: &[Coefficient]) -> String {
    if factors.is_empty() {
        return "1".to_string();
    }
    // Collapse repeated coefficients into powers, keeping first-appearance
    // order so the strings read like the tabulated products.
    let mut seen: Vec<Coefficient> = Vec::new();
    for &f in factors {
        if !seen.contains(&f) {
            seen.push(f);
        }
    }
    let parts: Vec<String> = seen
        .iter()
        .map(|&coeff| {
            let count = factors.iter().filter(|&&f| f == coeff).count();
            if count == 1 {
                coeff.to_string()
            } else {
                format!("{coeff}^{count}")
            }
        })
        .collect();
    parts.join(" ")
}

/// Symbolic sum of all paths from `source` to `detector`, e.g.
/// `r_A^2 + t_A^2 r_B0^2`.
pub fn detector_expression(source: PhotonSource, bits_equal: bool, detector: DetectorId) -> String {
    let terms: Vec<String> = enumerate_paths(source, bits_equal)
        .iter()
        .filter(|p| p.detector == detector)
        .map(PathRecord::expression)
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// One row of an emitted probability table.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub table: &'static str,
    pub source: &'static str,
    pub bits_equal: &'static str,
    pub detector: String,
    pub expression: String,
    pub value: f64,
    pub value_exact: String,
}

/// Numeric and symbolic rows of all four detector tables; the first two are
/// the per-photon tables, the last two the no-photon delegations.
pub fn probability_table_rows(config: &SplitterConfig<Rat>) -> Vec<TableRow> {
    let mut rows = Vec::new();
    let cases: [(&'static str, PhotonSource, Option<PhotonSource>); 4] = [
        ("alice_photon", PhotonSource::AlicePhoton, None),
        ("bob_photon", PhotonSource::BobPhoton, None),
        ("bob_sends_none", PhotonSource::AlicePhoton, Some(PhotonSource::BobPhoton)),
        ("alice_sends_none", PhotonSource::BobPhoton, Some(PhotonSource::AlicePhoton)),
    ];
    for (table, source, absent) in cases {
        let source_name = match source {
            PhotonSource::AlicePhoton => "alice",
            PhotonSource::BobPhoton => "bob",
        };
        for bits_equal in [false, true] {
            let dist = match absent {
                Some(a) => no_photon_distribution(a, bits_equal, config),
                None => per_photon_distribution(source, bits_equal, config),
            };
            for (detector, value) in dist.iter() {
                rows.push(TableRow {
                    table,
                    source: source_name,
                    bits_equal: if bits_equal { "eq" } else { "neq" },
                    detector: detector.to_string(),
                    expression: detector_expression(source, bits_equal, detector),
                    value: value.to_f64(),
                    value_exact: format_rational(&value),
                });
            }
        }
    }
    rows
}

/// One row of the emitted path catalog.
#[derive(Debug, Clone, Serialize)]
pub struct PathRow {
    pub source: &'static str,
    pub bits_equal: &'static str,
    pub detector: String,
    pub route: String,
    pub expression: String,
    pub value: f64,
}

pub fn path_catalog_rows(config: &SplitterConfig<Rat>) -> Vec<PathRow> {
    let mut rows = Vec::new();
    for source in [PhotonSource::AlicePhoton, PhotonSource::BobPhoton] {
        for bits_equal in [false, true] {
            for record in enumerate_paths(source, bits_equal) {
                rows.push(PathRow {
                    source: match source {
                        PhotonSource::AlicePhoton => "alice",
                        PhotonSource::BobPhoton => "bob",
                    },
                    bits_equal: if bits_equal { "eq" } else { "neq" },
                    detector: record.detector.to_string(),
                    route: record.route.clone(),
                    expression: record.expression(),
                    value: record.probability::<Rat>(config).to_f64(),
                });
            }
        }
    }
    rows
}
