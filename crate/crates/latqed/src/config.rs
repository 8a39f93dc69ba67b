//! Run configuration: a strict line-based `key = value` format.
//!
//! A configuration file selects exactly one scenario and supplies its
//! parameters:
//!
//! ```text
//! schema_version = 1
//! scenario = criticality
//!
//! [parameters]
//! num_sites = 1000
//! spacing = 0.02
//! mass = 1.0
//! w_grid = 0.4, 0.8, 1.2, 1.6, 2.0, 2.4, 2.8, 3.2
//! ```
//!
//! Rules:
//! * `schema_version` is mandatory and must match the version this build
//!   understands.
//! * keys the selected scenario does not know are rejected, as are unknown
//!   sections and unknown top-level keys;
//! * every value must parse into the declared type and be finite;
//! * grids given as lists must ascend where the scenario requires it;
//! * all problems are collected and reported at once, each with the line
//!   it came from.
//!
//! Empty lines and lines starting with `#` are skipped. A `[units]` section
//! exists only for the `hierarchy` scenario, which is the one place where
//! dimensional inputs (microkelvin or nanokelvin) enter; every other scenario
//! works in natural units.

use std::collections::BTreeMap;
use std::fmt;

/// Configuration format version this build reads.
pub const SCHEMA_VERSION: u32 = 1;

/// One problem found while parsing or validating a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    /// 1-based line the problem was found on, when attributable to a line.
    pub line: Option<usize>,
    /// Human-readable description.
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {}: {}", n, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// Joins an issue list into one multi-line report.
pub fn format_issues(issues: &[ConfigIssue]) -> String {
    let lines: Vec<String> = issues.iter().map(|i| i.to_string()).collect();
    lines.join("\n")
}

/// The eleven runnable scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Full spectrum and in-gap bound states of one static chain.
    Spectrum,
    /// Bound level versus well depth, the dive into the lower continuum,
    /// and the continuum matching-equation oracle alongside.
    Criticality,
    /// Single-site impurity level against its closed-form cubic root.
    DeltaOracle,
    /// One time-dependent ramp: evolve, split in/out, count pairs.
    Dynamics,
    /// Pair yield versus ramp duration for a fixed well.
    AdiabaticScan,
    /// Vacuum decay rate versus uniform force, with the tunneling fit.
    SchwingerScan,
    /// Band structure of the bichromatic lattice, exact and semiclassical.
    Bands,
    /// Localized orbitals, their spreads, and the two-component mixing.
    Wannier,
    /// Energy-scale ordering check for a concrete cold-atom parameter set.
    Hierarchy,
    /// Exact diagonalization of the interacting chain at half filling.
    ManyBody,
    /// Fermion versus hard-core-boson spectra over random potentials.
    JwCheck,
}

impl Scenario {
    /// Name used in configuration files and reports.
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Spectrum => "spectrum",
            Scenario::Criticality => "criticality",
            Scenario::DeltaOracle => "delta_oracle",
            Scenario::Dynamics => "dynamics",
            Scenario::AdiabaticScan => "adiabatic_scan",
            Scenario::SchwingerScan => "schwinger_scan",
            Scenario::Bands => "bands",
            Scenario::Wannier => "wannier",
            Scenario::Hierarchy => "hierarchy",
            Scenario::ManyBody => "many_body",
            Scenario::JwCheck => "jw_check",
        }
    }

    fn from_name(name: &str) -> Option<Scenario> {
        ALL_SCENARIOS.iter().copied().find(|s| s.name() == name)
    }
}

const ALL_SCENARIOS: [Scenario; 11] = [
    Scenario::Spectrum,
    Scenario::Criticality,
    Scenario::DeltaOracle,
    Scenario::Dynamics,
    Scenario::AdiabaticScan,
    Scenario::SchwingerScan,
    Scenario::Bands,
    Scenario::Wannier,
    Scenario::Hierarchy,
    Scenario::ManyBody,
    Scenario::JwCheck,
];

/// Static potential families a spectrum run can diagonalize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WellChoice {
    /// No potential: the free staggered chain.
    Zero,
    /// Smooth square-like well of the given depth.
    WoodsSaxon { depth: f64 },
    /// Single-site impurity of dimensionless strength `phi`.
    DeltaSite { strength: f64, site: usize },
}

/// Parameters of a `spectrum` run.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumParams {
    pub num_sites: usize,
    pub spacing: f64,
    pub mass: f64,
    pub well: WellChoice,
    pub steepness: f64,
    pub half_width: f64,
}

/// Parameters of a `criticality` run.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalityParams {
    pub num_sites: usize,
    pub spacing: f64,
    pub mass: f64,
    pub steepness: f64,
    pub half_width: f64,
    /// Strictly ascending well depths to trace the level over.
    pub w_grid: Vec<f64>,
    /// How close to the lower gap edge the level must dive (units of mass).
    pub dive_margin: f64,
    /// Bisection tolerance on the critical depth.
    pub tolerance: f64,
    /// Whether to run the continuum matching-equation oracle alongside.
    pub oracle: bool,
}

/// Parameters of a `delta_oracle` run.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaOracleParams {
    pub num_sites: usize,
    pub spacing: f64,
    pub mass: f64,
    /// Impurity strengths to compare, each nonzero.
    pub phi_values: Vec<f64>,
}

/// Time-envelope shape of a ramped run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RampChoice {
    Linear,
    Smooth,
}

/// Parameters of a `dynamics` run.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsParams {
    pub num_sites: usize,
    pub spacing: f64,
    pub mass: f64,
    pub depth: f64,
    pub steepness: f64,
    pub half_width: f64,
    pub t_on: f64,
    pub t_plateau: f64,
    pub t_off: f64,
    pub ramp: RampChoice,
}

/// Parameters of an `adiabatic_scan` run.
#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticScanParams {
    pub num_sites: usize,
    pub spacing: f64,
    pub mass: f64,
    pub depth: f64,
    pub steepness: f64,
    pub half_width: f64,
    /// Strictly ascending cycle durations.
    pub durations: Vec<f64>,
}

/// Parameters of a `schwinger_scan` run.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwingerScanParams {
    pub num_sites: usize,
    pub spacing: f64,
    pub mass: f64,
    /// Strictly ascending force values, at least three.
    pub fields: Vec<f64>,
    pub window_start: usize,
    pub window_stop: usize,
    pub ramp_time: f64,
    pub plateau_time: f64,
}

/// Parameters of a `bands` run.
#[derive(Debug, Clone, PartialEq)]
pub struct BandsParams {
    pub primary_depth: f64,
    pub imbalance: f64,
    pub wavenumber: f64,
    /// Momentum grid resolution; the grid has `n_momenta + 1` points.
    pub n_momenta: usize,
    pub n_planewaves: usize,
    /// Whether to run the semiclassical solver alongside the exact one.
    pub wkb: bool,
}

/// Parameters of a `wannier` run.
#[derive(Debug, Clone, PartialEq)]
pub struct WannierParams {
    pub primary_depth: f64,
    pub imbalance: f64,
    pub wavenumber: f64,
    pub n_momenta: usize,
    pub points_per_cell: usize,
}

/// Parameters of a `hierarchy` run. All four inputs share one energy unit,
/// chosen in the `[units]` section; outputs are reported in microkelvin.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyParams {
    pub recoil_energy: f64,
    pub primary_depth: f64,
    pub imbalance: f64,
    pub temperature: f64,
    /// Minimal acceptable ratio between consecutive energy scales.
    pub min_ratio: f64,
    /// Multiplier converting the configured unit into microkelvin.
    pub unit_to_microkelvin: f64,
    /// Name of the configured unit, echoed in reports.
    pub unit_name: &'static str,
}

/// Parameters of a `many_body` run.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyParams {
    pub num_sites: usize,
    pub hopping: f64,
    pub mass: f64,
    /// Extra square-well depth subtracted on `well_start..well_stop`.
    pub well_depth: f64,
    pub well_start: usize,
    pub well_stop: usize,
    /// Dipolar amplitudes to scan.
    pub d0_values: Vec<f64>,
}

/// Parameters of a `jw_check` run.
#[derive(Debug, Clone, PartialEq)]
pub struct JwCheckParams {
    /// Chain lengths to test, each even and small enough for dense spectra.
    pub sizes: Vec<usize>,
    /// Random potential draws per chain length.
    pub draws: usize,
    pub hopping: f64,
    /// Half-width of the uniform site-potential distribution.
    pub amplitude: f64,
}

/// Scenario selector together with its validated, typed parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioParams {
    Spectrum(SpectrumParams),
    Criticality(CriticalityParams),
    DeltaOracle(DeltaOracleParams),
    Dynamics(DynamicsParams),
    AdiabaticScan(AdiabaticScanParams),
    SchwingerScan(SchwingerScanParams),
    Bands(BandsParams),
    Wannier(WannierParams),
    Hierarchy(HierarchyParams),
    ManyBody(ManyBodyParams),
    JwCheck(JwCheckParams),
}

impl ScenarioParams {
    /// The scenario this parameter set belongs to.
    pub fn scenario(&self) -> Scenario {
        match self {
            ScenarioParams::Spectrum(_) => Scenario::Spectrum,
            ScenarioParams::Criticality(_) => Scenario::Criticality,
            ScenarioParams::DeltaOracle(_) => Scenario::DeltaOracle,
            ScenarioParams::Dynamics(_) => Scenario::Dynamics,
            ScenarioParams::AdiabaticScan(_) => Scenario::AdiabaticScan,
            ScenarioParams::SchwingerScan(_) => Scenario::SchwingerScan,
            ScenarioParams::Bands(_) => Scenario::Bands,
            ScenarioParams::Wannier(_) => Scenario::Wannier,
            ScenarioParams::Hierarchy(_) => Scenario::Hierarchy,
            ScenarioParams::ManyBody(_) => Scenario::ManyBody,
            ScenarioParams::JwCheck(_) => Scenario::JwCheck,
        }
    }
}

/// A fully parsed and validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    /// Seed for the scenarios that draw random numbers.
    pub seed: u64,
    /// Output directory requested by the file; a command-line flag overrides.
    pub output_dir: Option<String>,
    pub params: ScenarioParams,
    /// Verbatim text the configuration was parsed from, echoed in manifests.
    pub raw_text: String,
}

impl ScenarioConfig {
    /// The configured scenario.
    pub fn scenario(&self) -> Scenario {
        self.params.scenario()
    }
}

/// One raw `key = value` occurrence.
#[derive(Debug, Clone)]
struct RawEntry {
    line: usize,
    value: String,
}

type RawSection = BTreeMap<String, RawEntry>;

#[derive(Debug, Default)]
struct RawConfig {
    top: RawSection,
    parameters: RawSection,
    units: RawSection,
    units_line: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SectionId {
    Top,
    Parameters,
    Units,
}

fn split_raw(text: &str, issues: &mut Vec<ConfigIssue>) -> RawConfig {
    let mut raw = RawConfig::default();
    let mut current = SectionId::Top;
    let mut seen_parameters = false;
    let mut seen_units = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed.starts_with('[') {
            if !trimmed.ends_with(']') {
                issues.push(ConfigIssue {
                    line: Some(lineno),
                    message: format!("unterminated section header `{trimmed}`"),
                });
                continue;
            }
            let name = trimmed[1..trimmed.len() - 1].trim();
            match name {
                "parameters" => {
                    if seen_parameters {
                        issues.push(ConfigIssue {
                            line: Some(lineno),
                            message: String::from("section [parameters] declared twice"),
                        });
                    }
                    seen_parameters = true;
                    current = SectionId::Parameters;
                }
                "units" => {
                    if seen_units {
                        issues.push(ConfigIssue {
                            line: Some(lineno),
                            message: String::from("section [units] declared twice"),
                        });
                    }
                    seen_units = true;
                    raw.units_line = Some(lineno);
                    current = SectionId::Units;
                }
                other => {
                    issues.push(ConfigIssue {
                        line: Some(lineno),
                        message: format!(
                            "unknown section [{other}] (expected [parameters] or [units])"
                        ),
                    });
                    current = SectionId::Top;
                }
            }
            continue;
        }
        let Some(eq) = trimmed.find('=') else {
            issues.push(ConfigIssue {
                line: Some(lineno),
                message: format!("expected `key = value`, got `{trimmed}`"),
            });
            continue;
        };
        let key = trimmed[..eq].trim();
        let value = trimmed[eq + 1..].trim();
        if key.is_empty() {
            issues.push(ConfigIssue {
                line: Some(lineno),
                message: String::from("missing key before `=`"),
            });
            continue;
        }
        if !key
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        {
            issues.push(ConfigIssue {
                line: Some(lineno),
                message: format!(
                    "key `{key}` is not a valid identifier (lowercase letters, digits, `_`)"
                ),
            });
            continue;
        }
        if value.is_empty() {
            issues.push(ConfigIssue {
                line: Some(lineno),
                message: format!("key `{key}` has an empty value"),
            });
            continue;
        }
        let section = match current {
            SectionId::Top => &mut raw.top,
            SectionId::Parameters => &mut raw.parameters,
            SectionId::Units => &mut raw.units,
        };
        if section.contains_key(key) {
            issues.push(ConfigIssue {
                line: Some(lineno),
                message: format!("duplicate key `{key}`"),
            });
            continue;
        }
        section.insert(
            key.to_string(),
            RawEntry {
                line: lineno,
                value: value.to_string(),
            },
        );
    }
    raw
}

/// Typed readers over one raw section. Each reader pushes an issue and
/// returns a placeholder on failure, so validation keeps going and reports
/// everything at once.
struct SectionReader<'a> {
    section: &'a RawSection,
    issues: &'a mut Vec<ConfigIssue>,
}

impl<'a> SectionReader<'a> {
    fn new(section: &'a RawSection, issues: &'a mut Vec<ConfigIssue>) -> Self {
        SectionReader { section, issues }
    }

    fn push(&mut self, line: Option<usize>, message: String) {
        self.issues.push(ConfigIssue { line, message });
    }

    fn reject_unknown(&mut self, allowed: &[&str], context: &str) {
        let unknown: Vec<(usize, String)> = self
            .section
            .iter()
            .filter(|(key, _)| !allowed.contains(&key.as_str()))
            .map(|(key, entry)| (entry.line, key.clone()))
            .collect();
        for (line, key) in unknown {
            self.push(
                Some(line),
                format!("unknown key `{key}` for {context}"),
            );
        }
    }

    fn require(&mut self, key: &str) -> Option<&'a RawEntry> {
        let entry = self.section.get(key);
        if entry.is_none() {
            self.push(None, format!("missing mandatory key `{key}`"));
        }
        entry
    }

    fn parse_f64(&mut self, key: &str, entry: &RawEntry) -> Option<f64> {
        match entry.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            Ok(v) => {
                self.push(
                    Some(entry.line),
                    format!("value {v} for key `{key}` must be finite"),
                );
                None
            }
            Err(_) => {
                self.push(
                    Some(entry.line),
                    format!("value `{}` for key `{key}` is not a number", entry.value),
                );
                None
            }
        }
    }

    fn req_f64(&mut self, key: &str) -> Option<f64> {
        let entry = self.require(key)?;
        self.parse_f64(key, entry)
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Option<f64> {
        match self.section.get(key) {
            Some(entry) => self.parse_f64(key, entry),
            None => Some(default),
        }
    }

    fn parse_usize(&mut self, key: &str, entry: &RawEntry) -> Option<usize> {
        match entry.value.parse::<usize>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.push(
                    Some(entry.line),
                    format!(
                        "value `{}` for key `{key}` is not a non-negative integer",
                        entry.value
                    ),
                );
                None
            }
        }
    }

    fn req_usize(&mut self, key: &str) -> Option<usize> {
        let entry = self.require(key)?;
        self.parse_usize(key, entry)
    }

    fn usize_or(&mut self, key: &str, default: usize) -> Option<usize> {
        match self.section.get(key) {
            Some(entry) => self.parse_usize(key, entry),
            None => Some(default),
        }
    }

    fn bool_or(&mut self, key: &str, default: bool) -> Option<bool> {
        let Some(entry) = self.section.get(key) else {
            return Some(default);
        };
        match entry.value.as_str() {
            "true" => Some(true),
            "false" => Some(false),
            other => {
                self.push(
                    Some(entry.line),
                    format!("value `{other}` for key `{key}` must be `true` or `false`"),
                );
                None
            }
        }
    }

    fn parse_f64_list(&mut self, key: &str, entry: &RawEntry) -> Option<Vec<f64>> {
        let mut out = Vec::new();
        for (i, piece) in entry.value.split(',').enumerate() {
            let piece = piece.trim();
            match piece.parse::<f64>() {
                Ok(v) if v.is_finite() => out.push(v),
                _ => {
                    self.push(
                        Some(entry.line),
                        format!(
                            "value for key `{key}` is not a list of finite numbers \
                             (element {}: `{piece}`)",
                            i + 1
                        ),
                    );
                    return None;
                }
            }
        }
        Some(out)
    }

    fn req_f64_list(&mut self, key: &str) -> Option<Vec<f64>> {
        let entry = self.require(key)?;
        self.parse_f64_list(key, entry)
    }

    fn usize_list_or(&mut self, key: &str, default: &[usize]) -> Option<Vec<usize>> {
        let Some(entry) = self.section.get(key) else {
            return Some(default.to_vec());
        };
        let mut out = Vec::new();
        for (i, piece) in entry.value.split(',').enumerate() {
            let piece = piece.trim();
            match piece.parse::<usize>() {
                Ok(v) => out.push(v),
                Err(_) => {
                    self.push(
                        Some(entry.line),
                        format!(
                            "value for key `{key}` is not a list of non-negative integers \
                             (element {}: `{piece}`)",
                            i + 1
                        ),
                    );
                    return None;
                }
            }
        }
        Some(out)
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.section.get(key).map(|e| e.line)
    }

    /// Checks a list for strict ascent; the message is shared by every grid.
    fn check_ascending(&mut self, key: &str, values: &[f64]) {
        if values.windows(2).any(|w| w[1] <= w[0]) {
            let line = self.line_of(key);
            self.push(line, format!("grid must ascend (key `{key}`)"));
        }
    }

    fn check_positive(&mut self, key: &str, value: f64) {
        if !(value > 0.0) {
            let line = self.line_of(key);
            self.push(line, format!("key `{key}` must be positive, got {value}"));
        }
    }
}

/// Reads the three chain keys shared by every staggered-chain scenario.
fn read_chain(reader: &mut SectionReader<'_>) -> (usize, f64, f64) {
    let num_sites = reader.req_usize("num_sites").unwrap_or(0);
    let spacing = reader.req_f64("spacing").unwrap_or(0.0);
    let mass = reader.req_f64("mass").unwrap_or(0.0);
    if reader.section.contains_key("num_sites") && (num_sites < 4 || num_sites % 2 != 0) {
        let line = reader.line_of("num_sites");
        reader.push(
            line,
            format!("num_sites must be an even number of at least 4, got {num_sites}"),
        );
    }
    if reader.section.contains_key("spacing") {
        reader.check_positive("spacing", spacing);
    }
    if reader.section.contains_key("mass") {
        reader.check_positive("mass", mass);
    }
    (num_sites, spacing, mass)
}

fn validate_spectrum(
    section: &RawSection,
    issues: &mut Vec<ConfigIssue>,
) -> Option<SpectrumParams> {
    let mut reader = SectionReader::new(section, issues);
    reader.reject_unknown(
        &[
            "num_sites",
            "spacing",
            "mass",
            "potential",
            "depth",
            "steepness",
            "half_width",
            "delta_strength",
            "delta_site",
        ],
        "scenario spectrum",
    );
    let (num_sites, spacing, mass) = read_chain(&mut reader);
    let steepness = reader.f64_or("steepness", 10.0)?;
    reader.check_positive("steepness", steepness);
    let half_width = reader.f64_or("half_width", 1.0)?;
    reader.check_positive("half_width", half_width);
    let potential_entry = reader.require("potential")?.clone();
    let well = match potential_entry.value.as_str() {
        "zero" => Some(WellChoice::Zero),
        "woods_saxon" => {
            let depth = reader.req_f64("depth")?;
            reader.check_positive("depth", depth);
            Some(WellChoice::WoodsSaxon { depth })
        }
        "delta_site" => {
            let strength = reader.req_f64("delta_strength")?;
            let site = reader.usize_or("delta_site", num_sites / 2)?;
            if strength == 0.0 {
                let line = reader.line_of("delta_strength");
                reader.push(line, String::from("delta_strength must be nonzero"));
            }
            if site >= num_sites {
                let line = reader.line_of("delta_site");
                reader.push(
                    line,
                    format!("delta_site {site} outside chain of {num_sites} sites"),
                );
            }
            Some(WellChoice::DeltaSite { strength, site })
        }
        other => {
            reader.push(
                Some(potential_entry.line),
                format!(
                    "unknown potential `{other}` (expected zero, woods_saxon, or delta_site)"
                ),
            );
            None
        }
    }?;
    Some(SpectrumParams {
        num_sites,
        spacing,
        mass,
        well,
        steepness,
        half_width,
    })
}

fn validate_criticality(
    section: &RawSection,
    issues: &mut Vec<ConfigIssue>,
) -> Option<CriticalityParams> {
    let mut reader = SectionReader::new(section, issues);
    reader.reject_unknown(
        &[
            "num_sites",
            "spacing",
            "mass",
            "steepness",
            "half_width",
            "w_grid",
            "dive_margin",
            "tolerance",
            "oracle",
        ],
        "scenario criticality",
    );
    let (num_sites, spacing, mass) = read_chain(&mut reader);
    let steepness = reader.f64_or("steepness", 10.0)?;
    reader.check_positive("steepness", steepness);
    let half_width = reader.f64_or("half_width", 1.0)?;
    reader.check_positive("half_width", half_width);
    let w_grid = reader.req_f64_list("w_grid")?;
    if w_grid.len() < 2 {
        let line = reader.line_of("w_grid");
        reader.push(line, String::from("w_grid needs at least two depths"));
    }
    reader.check_ascending("w_grid", &w_grid);
    if w_grid.iter().any(|&w| w < 0.0) {
        let line = reader.line_of("w_grid");
        reader.push(line, String::from("w_grid depths must be non-negative"));
    }
    let dive_margin = reader.f64_or("dive_margin", 1e-3)?;
    let tolerance = reader.f64_or("tolerance", 1e-4)?;
    reader.check_positive("dive_margin", dive_margin);
    reader.check_positive("tolerance", tolerance);
    let oracle = reader.bool_or("oracle", true)?;
    Some(CriticalityParams {
        num_sites,
        spacing,
        mass,
        steepness,
        half_width,
        w_grid,
        dive_margin,
        tolerance,
        oracle,
    })
}

fn validate_delta_oracle(
    section: &RawSection,
    issues: &mut Vec<ConfigIssue>,
) -> Option<DeltaOracleParams> {
    let mut reader = SectionReader::new(section, issues);
    reader.reject_unknown(
        &["num_sites", "spacing", "mass", "phi_values"],
        "scenario delta_oracle",
    );
    let (num_sites, spacing, mass) = read_chain(&mut reader);
    let phi_values = reader.req_f64_list("phi_values")?;
    if phi_values.is_empty() {
        let line = reader.line_of("phi_values");
        reader.push(line, String::from("phi_values must not be empty"));
    }
    if phi_values.iter().any(|&p| p == 0.0) {
        let line = reader.line_of("phi_values");
        reader.push(line, String::from("phi_values must be nonzero"));
    }
    Some(DeltaOracleParams {
        num_sites,
        spacing,
        mass,
        phi_values,
    })
}

fn validate_dynamics(
    section: &RawSection,
    issues: &mut Vec<ConfigIssue>,
) -> Option<DynamicsParams> {
    let mut reader = SectionReader::new(section, issues);
    reader.reject_unknown(
        &[
            "num_sites",
            "spacing",
            "mass",
            "depth",
            "steepness",
            "half_width",
            "t_on",
            "t_plateau",
            "t_off",
            "ramp",
        ],
        "scenario dynamics",
    );
    let (num_sites, spacing, mass) = read_chain(&mut reader);
    let depth = reader.req_f64("depth")?;
    if depth < 0.0 {
        let line = reader.line_of("depth");
        reader.push(line, format!("key `depth` must be non-negative, got {depth}"));
    }
    let steepness = reader.f64_or("steepness", 10.0)?;
    reader.check_positive("steepness", steepness);
    let half_width = reader.f64_or("half_width", 1.0)?;
    reader.check_positive("half_width", half_width);
    let t_on = reader.req_f64("t_on")?;
    let t_plateau = reader.f64_or("t_plateau", 0.0)?;
    let t_off = reader.f64_or("t_off", t_on)?;
    reader.check_positive("t_on", t_on);
    if t_plateau < 0.0 || t_off < 0.0 {
        reader.push(
            None,
            String::from("t_plateau and t_off must be non-negative"),
        );
    }
    let ramp = match reader.section.get("ramp") {
        None => Some(RampChoice::Smooth),
        Some(entry) => match entry.value.as_str() {
            "linear" => Some(RampChoice::Linear),
            "smooth" => Some(RampChoice::Smooth),
            other => {
                reader.push(
                    Some(entry.line),
                    format!("unknown ramp `{other}` (expected linear or smooth)"),
                );
                None
            }
        },
    }?;
    Some(DynamicsParams {
        num_sites,
        spacing,
        mass,
        depth,
        steepness,
        half_width,
        t_on,
        t_plateau,
        t_off,
        ramp,
    })
}

fn validate_adiabatic_scan(
    section: &RawSection,
    issues: &mut Vec<ConfigIssue>,
) -> Option<AdiabaticScanParams> {
    let mut reader = SectionReader::new(section, issues);
    reader.reject_unknown(
        &[
            "num_sites",
            "spacing",
            "mass",
            "depth",
            "steepness",
            "half_width",
            "durations",
        ],
        "scenario adiabatic_scan",
    );
    let (num_sites, spacing, mass) = read_chain(&mut reader);
    let depth = reader.req_f64("depth")?;
    reader.check_positive("depth", depth);
    let steepness = reader.f64_or("steepness", 10.0)?;
    reader.check_positive("steepness", steepness);
    let half_width = reader.f64_or("half_width", 1.0)?;
    reader.check_positive("half_width", half_width);
    let durations = reader.req_f64_list("durations")?;
    if durations.is_empty() {
        let line = reader.line_of("durations");
        reader.push(line, String::from("durations must not be empty"));
    }
    if durations.first().copied().unwrap_or(1.0) <= 0.0 {
        let line = reader.line_of("durations");
        reader.push(line, String::from("durations must be positive"));
    }
    reader.check_ascending("durations", &durations);
    Some(AdiabaticScanParams {
        num_sites,
        spacing,
        mass,
        depth,
        steepness,
        half_width,
        durations,
    })
}

fn validate_schwinger_scan(
    section: &RawSection,
    issues: &mut Vec<ConfigIssue>,
) -> Option<SchwingerScanParams> {
    let mut reader = SectionReader::new(section, issues);
    reader.reject_unknown(
        &[
            "num_sites",
            "spacing",
            "mass",
            "fields",
            "window_start",
            "window_stop",
            "ramp_time",
            "plateau_time",
        ],
        "scenario schwinger_scan",
    );
    let (num_sites, spacing, mass) = read_chain(&mut reader);
    let fields = reader.req_f64_list("fields")?;
    if fields.len() < 3 {
        let line = reader.line_of("fields");
        reader.push(line, String::from("fields needs at least three values"));
    }
    if fields.first().copied().unwrap_or(1.0) <= 0.0 {
        let line = reader.line_of("fields");
        reader.push(line, String::from("fields must be positive"));
    }
    reader.check_ascending("fields", &fields);
    let window_start = reader.usize_or("window_start", 0)?;
    let window_stop = reader.usize_or("window_stop", num_sites.saturating_sub(1))?;
    if window_start >= window_stop || window_stop >= num_sites {
        reader.push(
            None,
            format!(
                "window [{window_start}, {window_stop}] must satisfy \
                 window_start < window_stop < num_sites = {num_sites}"
            ),
        );
    }
    let ramp_time = reader.req_f64("ramp_time")?;
    let plateau_time = reader.req_f64("plateau_time")?;
    reader.check_positive("ramp_time", ramp_time);
    reader.check_positive("plateau_time", plateau_time);
    Some(SchwingerScanParams {
        num_sites,
        spacing,
        mass,
        fields,
        window_start,
        window_stop,
        ramp_time,
        plateau_time,
    })
}

fn validate_bands(section: &RawSection, issues: &mut Vec<ConfigIssue>) -> Option<BandsParams> {
    let mut reader = SectionReader::new(section, issues);
    reader.reject_unknown(
        &[
            "primary_depth",
            "imbalance",
            "wavenumber",
            "n_momenta",
            "n_planewaves",
            "wkb",
        ],
        "scenario bands",
    );
    let primary_depth = reader.req_f64("primary_depth")?;
    reader.check_positive("primary_depth", primary_depth);
    let imbalance = reader.req_f64("imbalance")?;
    if imbalance < 0.0 {
        let line = reader.line_of("imbalance");
        reader.push(
            line,
            format!("key `imbalance` must be non-negative, got {imbalance}"),
        );
    }
    let wavenumber = reader.f64_or("wavenumber", 1.0)?;
    reader.check_positive("wavenumber", wavenumber);
    let n_momenta = reader.usize_or("n_momenta", 16)?;
    if n_momenta < 8 || n_momenta % 2 != 0 {
        let line = reader.line_of("n_momenta");
        reader.push(
            line,
            format!("n_momenta must be an even number of at least 8, got {n_momenta}"),
        );
    }
    let n_planewaves = reader.usize_or("n_planewaves", 64)?;
    if n_planewaves < 64 {
        let line = reader.line_of("n_planewaves");
        reader.push(
            line,
            format!("n_planewaves must be at least 64, got {n_planewaves}"),
        );
    }
    let wkb = reader.bool_or("wkb", true)?;
    Some(BandsParams {
        primary_depth,
        imbalance,
        wavenumber,
        n_momenta,
        n_planewaves,
        wkb,
    })
}

fn validate_wannier(
    section: &RawSection,
    issues: &mut Vec<ConfigIssue>,
) -> Option<WannierParams> {
    let mut reader = SectionReader::new(section, issues);
    reader.reject_unknown(
        &[
            "primary_depth",
            "imbalance",
            "wavenumber",
            "n_momenta",
            "points_per_cell",
        ],
        "scenario wannier",
    );
    let primary_depth = reader.req_f64("primary_depth")?;
    reader.check_positive("primary_depth", primary_depth);
    let imbalance = reader.req_f64("imbalance")?;
    if imbalance < 0.0 {
        let line = reader.line_of("imbalance");
        reader.push(
            line,
            format!("key `imbalance` must be non-negative, got {imbalance}"),
        );
    }
    let wavenumber = reader.f64_or("wavenumber", 1.0)?;
    reader.check_positive("wavenumber", wavenumber);
    let n_momenta = reader.usize_or("n_momenta", 32)?;
    if n_momenta < 8 || n_momenta > 512 || n_momenta % 2 != 0 {
        let line = reader.line_of("n_momenta");
        reader.push(
            line,
            format!("n_momenta must be even and within 8..=512, got {n_momenta}"),
        );
    }
    let points_per_cell = reader.usize_or("points_per_cell", 128)?;
    if points_per_cell < 68 {
        let line = reader.line_of("points_per_cell");
        reader.push(
            line,
            format!("points_per_cell must be at least 68, got {points_per_cell}"),
        );
    }
    Some(WannierParams {
        primary_depth,
        imbalance,
        wavenumber,
        n_momenta,
        points_per_cell,
    })
}

fn validate_hierarchy(
    section: &RawSection,
    units: &RawSection,
    issues: &mut Vec<ConfigIssue>,
) -> Option<HierarchyParams> {
    let (unit_to_microkelvin, unit_name) = {
        let mut units_reader = SectionReader::new(units, issues);
        units_reader.reject_unknown(&["energy_scale"], "the [units] section");
        match units_reader.section.get("energy_scale") {
            None => (Some(1.0), "microkelvin"),
            Some(entry) => match entry.value.as_str() {
                "microkelvin" => (Some(1.0), "microkelvin"),
                "nanokelvin" => (Some(1e-3), "nanokelvin"),
                other => {
                    let line = entry.line;
                    units_reader.push(
                        Some(line),
                        format!(
                            "unknown energy_scale `{other}` \
                             (expected microkelvin or nanokelvin)"
                        ),
                    );
                    (None, "microkelvin")
                }
            },
        }
    };
    let mut reader = SectionReader::new(section, issues);
    reader.reject_unknown(
        &[
            "recoil_energy",
            "primary_depth",
            "imbalance",
            "temperature",
            "min_ratio",
        ],
        "scenario hierarchy",
    );
    let recoil_energy = reader.req_f64("recoil_energy")?;
    let primary_depth = reader.req_f64("primary_depth")?;
    let imbalance = reader.req_f64("imbalance")?;
    let temperature = reader.req_f64("temperature")?;
    reader.check_positive("recoil_energy", recoil_energy);
    reader.check_positive("primary_depth", primary_depth);
    reader.check_positive("imbalance", imbalance);
    reader.check_positive("temperature", temperature);
    let min_ratio = reader.f64_or("min_ratio", 3.0)?;
    if !(min_ratio >= 1.0) {
        let line = reader.line_of("min_ratio");
        reader.push(
            line,
            format!("min_ratio must be at least 1, got {min_ratio}"),
        );
    }
    Some(HierarchyParams {
        recoil_energy,
        primary_depth,
        imbalance,
        temperature,
        min_ratio,
        unit_to_microkelvin: unit_to_microkelvin?,
        unit_name,
    })
}

fn validate_many_body(
    section: &RawSection,
    issues: &mut Vec<ConfigIssue>,
) -> Option<ManyBodyParams> {
    let mut reader = SectionReader::new(section, issues);
    reader.reject_unknown(
        &[
            "num_sites",
            "hopping",
            "mass",
            "well_depth",
            "well_start",
            "well_stop",
            "d0_values",
        ],
        "scenario many_body",
    );
    let num_sites = reader.req_usize("num_sites").unwrap_or(0);
    if reader.section.contains_key("num_sites")
        && (num_sites < 2 || num_sites > 14 || num_sites % 2 != 0)
    {
        let line = reader.line_of("num_sites");
        reader.push(
            line,
            format!("num_sites must be even and within 2..=14, got {num_sites}"),
        );
    }
    let hopping = reader.req_f64("hopping")?;
    reader.check_positive("hopping", hopping);
    let mass = reader.req_f64("mass")?;
    reader.check_positive("mass", mass);
    let well_depth = reader.f64_or("well_depth", 0.0)?;
    if well_depth < 0.0 {
        let line = reader.line_of("well_depth");
        reader.push(
            line,
            format!("key `well_depth` must be non-negative, got {well_depth}"),
        );
    }
    let well_start = reader.usize_or("well_start", num_sites / 3)?;
    let well_stop = reader.usize_or("well_stop", (2 * num_sites).div_euclid(3))?;
    if well_depth > 0.0 && (well_start >= well_stop || well_stop > num_sites) {
        reader.push(
            None,
            format!(
                "well [{well_start}, {well_stop}) must satisfy \
                 well_start < well_stop <= num_sites = {num_sites}"
            ),
        );
    }
    let d0_values = match reader.section.get("d0_values") {
        None => Some(vec![0.0]),
        Some(entry) => {
            let entry = entry.clone();
            reader.parse_f64_list("d0_values", &entry)
        }
    }?;
    if d0_values.is_empty() {
        let line = reader.line_of("d0_values");
        reader.push(line, String::from("d0_values must not be empty"));
    }
    Some(ManyBodyParams {
        num_sites,
        hopping,
        mass,
        well_depth,
        well_start,
        well_stop,
        d0_values,
    })
}

fn validate_jw_check(
    section: &RawSection,
    issues: &mut Vec<ConfigIssue>,
) -> Option<JwCheckParams> {
    let mut reader = SectionReader::new(section, issues);
    reader.reject_unknown(
        &["sizes", "draws", "hopping", "amplitude"],
        "scenario jw_check",
    );
    let sizes = reader.usize_list_or("sizes", &[4, 6, 8, 10])?;
    if sizes.is_empty() {
        let line = reader.line_of("sizes");
        reader.push(line, String::from("sizes must not be empty"));
    }
    for &l in &sizes {
        if l < 4 || l > 12 || l % 2 != 0 {
            let line = reader.line_of("sizes");
            reader.push(
                line,
                format!("chain lengths must be even and within 4..=12, got {l}"),
            );
            break;
        }
    }
    let draws = reader.usize_or("draws", 50)?;
    if draws == 0 {
        let line = reader.line_of("draws");
        reader.push(line, String::from("draws must be at least 1"));
    }
    let hopping = reader.f64_or("hopping", 1.0)?;
    reader.check_positive("hopping", hopping);
    let amplitude = reader.f64_or("amplitude", 1.0)?;
    reader.check_positive("amplitude", amplitude);
    Some(JwCheckParams {
        sizes,
        draws,
        hopping,
        amplitude,
    })
}

/// Parses and validates a configuration file. On failure returns every
/// problem found, each carrying the line it was detected on where that
/// makes sense.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, Vec<ConfigIssue>> {
    let mut issues = Vec::new();
    let raw = split_raw(text, &mut issues);

    for (key, entry) in &raw.top {
        if !matches!(
            key.as_str(),
            "schema_version" | "scenario" | "seed" | "output_dir"
        ) {
            issues.push(ConfigIssue {
                line: Some(entry.line),
                message: format!(
                    "unknown top-level key `{key}` \
                     (expected schema_version, scenario, seed, or output_dir)"
                ),
            });
        }
    }

    let schema_version = match raw.top.get("schema_version") {
        None => {
            issues.push(ConfigIssue {
                line: None,
                message: String::from("missing mandatory key `schema_version`"),
            });
            None
        }
        Some(entry) => match entry.value.parse::<u32>() {
            Ok(v) if v == SCHEMA_VERSION => Some(v),
            Ok(v) => {
                issues.push(ConfigIssue {
                    line: Some(entry.line),
                    message: format!(
                        "unsupported schema_version {v} (this build reads version {SCHEMA_VERSION})"
                    ),
                });
                None
            }
            Err(_) => {
                issues.push(ConfigIssue {
                    line: Some(entry.line),
                    message: format!(
                        "value `{}` for key `schema_version` is not an integer",
                        entry.value
                    ),
                });
                None
            }
        },
    };

    let scenario = match raw.top.get("scenario") {
        None => {
            issues.push(ConfigIssue {
                line: None,
                message: String::from("missing mandatory key `scenario`"),
            });
            None
        }
        Some(entry) => match Scenario::from_name(&entry.value) {
            Some(s) => Some(s),
            None => {
                let names: Vec<&str> = ALL_SCENARIOS.iter().map(|s| s.name()).collect();
                issues.push(ConfigIssue {
                    line: Some(entry.line),
                    message: format!(
                        "unknown scenario `{}` (expected one of: {})",
                        entry.value,
                        names.join(", ")
                    ),
                });
                None
            }
        },
    };

    let seed = match raw.top.get("seed") {
        None => 0,
        Some(entry) => match entry.value.parse::<u64>() {
            Ok(v) => v,
            Err(_) => {
                issues.push(ConfigIssue {
                    line: Some(entry.line),
                    message: format!(
                        "value `{}` for key `seed` is not a non-negative integer",
                        entry.value
                    ),
                });
                0
            }
        },
    };

    let output_dir = raw.top.get("output_dir").map(|e| e.value.clone());

    if !raw.units.is_empty() && scenario != Some(Scenario::Hierarchy) {
        issues.push(ConfigIssue {
            line: raw.units_line,
            message: String::from("the [units] section applies only to the hierarchy scenario"),
        });
    }

    let params = scenario.and_then(|s| match s {
        Scenario::Spectrum => {
            validate_spectrum(&raw.parameters, &mut issues).map(ScenarioParams::Spectrum)
        }
        Scenario::Criticality => {
            validate_criticality(&raw.parameters, &mut issues).map(ScenarioParams::Criticality)
        }
        Scenario::DeltaOracle => {
            validate_delta_oracle(&raw.parameters, &mut issues).map(ScenarioParams::DeltaOracle)
        }
        Scenario::Dynamics => {
            validate_dynamics(&raw.parameters, &mut issues).map(ScenarioParams::Dynamics)
        }
        Scenario::AdiabaticScan => validate_adiabatic_scan(&raw.parameters, &mut issues)
            .map(ScenarioParams::AdiabaticScan),
        Scenario::SchwingerScan => validate_schwinger_scan(&raw.parameters, &mut issues)
            .map(ScenarioParams::SchwingerScan),
        Scenario::Bands => validate_bands(&raw.parameters, &mut issues).map(ScenarioParams::Bands),
        Scenario::Wannier => {
            validate_wannier(&raw.parameters, &mut issues).map(ScenarioParams::Wannier)
        }
        Scenario::Hierarchy => validate_hierarchy(&raw.parameters, &raw.units, &mut issues)
            .map(ScenarioParams::Hierarchy),
        Scenario::ManyBody => {
            validate_many_body(&raw.parameters, &mut issues).map(ScenarioParams::ManyBody)
        }
        Scenario::JwCheck => {
            validate_jw_check(&raw.parameters, &mut issues).map(ScenarioParams::JwCheck)
        }
    });

    match (params, schema_version) {
        (Some(params), Some(schema_version)) if issues.is_empty() => Ok(ScenarioConfig {
            schema_version,
            seed,
            output_dir,
            params,
            raw_text: text.to_string(),
        }),
        _ => {
            if issues.is_empty() {
                // Unreachable by construction: a missing params or version
                // always pushes an issue first. Keep a guard anyway.
                issues.push(ConfigIssue {
                    line: None,
                    message: String::from("configuration is incomplete"),
                });
            }
            Err(issues)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_criticality() -> String {
        String::from(
            "schema_version = 1\n\
             scenario = criticality\n\
             \n\
             [parameters]\n\
             num_sites = 200\n\
             spacing = 0.1\n\
             mass = 1.0\n\
             w_grid = 0.5, 1.0, 1.5\n",
        )
    }

    #[test]
    fn minimal_criticality_config_parses() {
        let config = parse_config(&minimal_criticality()).expect("config should parse");
        assert_eq!(config.schema_version, 1);
        assert_eq!(config.scenario(), Scenario::Criticality);
        assert_eq!(config.seed, 0);
        let ScenarioParams::Criticality(p) = &config.params else {
            panic!("wrong params variant");
        };
        assert_eq!(p.num_sites, 200);
        assert_eq!(p.w_grid, vec![0.5, 1.0, 1.5]);
        assert_eq!(p.steepness, 10.0);
        assert!(p.oracle);
    }

    #[test]
    fn missing_schema_version_is_reported_by_name() {
        let text = "scenario = jw_check\n";
        let issues = parse_config(text).unwrap_err();
        assert!(issues
            .iter()
            .any(|i| i.message.contains("missing mandatory key `schema_version`")));
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let text = "schema_version = 7\nscenario = jw_check\n";
        let issues = parse_config(text).unwrap_err();
        assert!(issues
            .iter()
            .any(|i| i.message.contains("unsupported schema_version 7")));
    }

    #[test]
    fn descending_grid_reports_grid_must_ascend_with_line() {
        let text = minimal_criticality().replace("0.5, 1.0, 1.5", "1.5, 1.0, 0.5");
        let issues = parse_config(&text).unwrap_err();
        let issue = issues
            .iter()
            .find(|i| i.message.contains("grid must ascend"))
            .expect("expected a grid order issue");
        assert_eq!(issue.line, Some(8));
    }

    #[test]
    fn unknown_key_is_rejected_with_its_line() {
        let mut text = minimal_criticality();
        text.push_str("bogus_key = 3\n");
        let issues = parse_config(&text).unwrap_err();
        let issue = issues
            .iter()
            .find(|i| i.message.contains("unknown key `bogus_key`"))
            .expect("expected an unknown-key issue");
        assert_eq!(issue.line, Some(9));
    }

    #[test]
    fn all_problems_are_reported_at_once() {
        let text = "scenario = criticality\n\
                    [parameters]\n\
                    num_sites = 201\n\
                    spacing = -0.1\n\
                    mass = abc\n\
                    w_grid = 1.5, 1.0\n\
                    mystery = 1\n";
        let issues = parse_config(text).unwrap_err();
        let all = format_issues(&issues);
        assert!(all.contains("missing mandatory key `schema_version`"), "{all}");
        assert!(all.contains("num_sites must be an even number"), "{all}");
        assert!(all.contains("key `spacing` must be positive"), "{all}");
        assert!(all.contains("is not a number"), "{all}");
        assert!(all.contains("grid must ascend"), "{all}");
        assert!(all.contains("unknown key `mystery`"), "{all}");
        assert!(issues.len() >= 6);
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let mut text = minimal_criticality();
        text.push_str("mass = 2.0\n");
        let issues = parse_config(&text).unwrap_err();
        assert!(issues.iter().any(|i| i.message.contains("duplicate key `mass`")));
    }

    #[test]
    fn units_section_is_rejected_outside_hierarchy() {
        let mut text = minimal_criticality();
        text.push_str("[units]\nenergy_scale = microkelvin\n");
        let issues = parse_config(&text).unwrap_err();
        assert!(issues
            .iter()
            .any(|i| i.message.contains("applies only to the hierarchy scenario")));
    }

    #[test]
    fn hierarchy_accepts_units_and_converts() {
        let text = "schema_version = 1\n\
                    scenario = hierarchy\n\
                    [parameters]\n\
                    recoil_energy = 7000\n\
                    primary_depth = 70000\n\
                    imbalance = 1000\n\
                    temperature = 100\n\
                    [units]\n\
                    energy_scale = nanokelvin\n";
        let config = parse_config(text).expect("config should parse");
        let ScenarioParams::Hierarchy(p) = &config.params else {
            panic!("wrong params variant");
        };
        assert_eq!(p.unit_to_microkelvin, 1e-3);
        assert_eq!(p.unit_name, "nanokelvin");
        assert_eq!(p.min_ratio, 3.0);
    }

    #[test]
    fn jw_check_defaults_fill_in() {
        let text = "schema_version = 1\nscenario = jw_check\nseed = 42\n";
        let config = parse_config(text).expect("config should parse");
        assert_eq!(config.seed, 42);
        let ScenarioParams::JwCheck(p) = &config.params else {
            panic!("wrong params variant");
        };
        assert_eq!(p.sizes, vec![4, 6, 8, 10]);
        assert_eq!(p.draws, 50);
        assert_eq!(p.hopping, 1.0);
        assert_eq!(p.amplitude, 1.0);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# a comment\n\nschema_version = 1\n# another\nscenario = jw_check\n";
        assert!(parse_config(text).is_ok());
    }

    #[test]
    fn unknown_scenario_lists_the_valid_names() {
        let text = "schema_version = 1\nscenario = warp_drive\n";
        let issues = parse_config(text).unwrap_err();
        let all = format_issues(&issues);
        assert!(all.contains("unknown scenario `warp_drive`"), "{all}");
        assert!(all.contains("criticality"), "{all}");
        assert!(all.contains("jw_check"), "{all}");
    }

    #[test]
    fn spectrum_delta_site_defaults_to_chain_center() {
        let text = "schema_version = 1\n\
                    scenario = spectrum\n\
                    [parameters]\n\
                    num_sites = 100\n\
                    spacing = 0.1\n\
                    mass = 1.0\n\
                    potential = delta_site\n\
                    delta_strength = -0.5\n";
        let config = parse_config(text).expect("config should parse");
        let ScenarioParams::Spectrum(p) = &config.params else {
            panic!("wrong params variant");
        };
        assert_eq!(
            p.well,
            WellChoice::DeltaSite {
                strength: -0.5,
                site: 50
            }
        );
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = "schema_version = 1\nscenario = jw_check\nnot a key value line\n";
        let issues = parse_config(text).unwrap_err();
        let issue = &issues[0];
        assert_eq!(issue.line, Some(3));
        assert!(issue.message.contains("expected `key = value`"));
    }
}
