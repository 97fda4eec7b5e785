//! Flat `key = value` configuration files.
//!
//! Lines are `key = value`; `#` starts a comment; dotted keys group related
//! settings. Every key has a default, unknown keys are rejected, and all
//! problems are reported together with their key and line.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::geometry::GridSpec;
use crate::integrator::DampingScheme;
use crate::operators::PotentialKind;
use crate::variational::source_exponent_ceiling;

/// One problem found in a configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line, or `None` for a defaulted key.
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

/// Every problem found in a configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl ConfigErrors {
    pub fn iter(&self) -> impl Iterator<Item = &ConfigError> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mentions(&self, key: &str) -> bool {
        self.0.iter().any(|e| e.key == key)
    }
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} configuration error(s)", self.0.len())?;
        for e in &self.0 {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

/// Spatial profile of the source weight `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceProfile {
    /// `g ≡ β`
    Constant,
    /// `g = β (1 + x1)/2`, increasing towards the outer boundary.
    RadialLinear,
}

impl SourceProfile {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::RadialLinear => "radial-linear",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub p: f64,
    pub m: f64,
    pub gamma: f64,
    pub potential: PotentialKind,
    pub g: SourceProfile,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    /// `None` uses the stability limit.
    pub dt: Option<f64>,
    pub cfl_safety: f64,
    pub t_max: f64,
    /// `None` scales the cap with the data.
    pub blowup_cap: Option<f64>,
    pub newton_tol: f64,
    pub damping: DampingScheme,
    pub fixed_step: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    /// `amplitude · ω1`
    Eigenmode,
    /// Gaussian bump centered at `(center_s, L/2, ..., L/2)`.
    GaussianBump,
    /// A profile scaled onto the Nehari manifold, then by `amplitude`.
    NehariScaled,
    /// Data at a prescribed positive energy satisfying the high-energy
    /// blow-up criterion.
    HighEnergy,
}

impl InitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Eigenmode => "eigenmode",
            Self::GaussianBump => "gaussian-bump",
            Self::NehariScaled => "nehari-scaled",
            Self::HighEnergy => "high-energy",
        }
    }
}

/// Profile rescaled by the `nehari-scaled` initial data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Eigenmode,
    GaussianBump,
    /// Smooth random field drawn from the seed.
    Random,
}

impl Profile {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Eigenmode => "eigenmode",
            Self::GaussianBump => "gaussian-bump",
            Self::Random => "random",
        }
    }
}

/// Target energy of the high-energy construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyLevel {
    Absolute(f64),
    /// A multiple of the well depth, written `2d`.
    DepthMultiple(f64),
}

impl fmt::Display for EnergyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Absolute(v) => write!(f, "{v}"),
            Self::DepthMultiple(k) => write!(f, "{k}d"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitSpec {
    pub kind: InitKind,
    pub amplitude: f64,
    pub seed: u64,
    pub energy: EnergyLevel,
    pub profile: Profile,
    /// Bump center in `s`; `None` means the middle of `(s_min, 0)`.
    pub center_s: Option<f64>,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub record_every: usize,
}

/// Settings of the constant estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsSpec {
    pub restarts: usize,
    /// Proposals of the sampled Nehari infimum; `0` skips it.
    pub nehari_samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub model: ModelSpec,
    pub scheme: SchemeSpec,
    pub init: InitSpec,
    pub constants: ConstantsSpec,
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Amplitude,
    Gamma,
    P,
    M,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Amplitude => "amplitude",
            Self::Gamma => "gamma",
            Self::P => "p",
            Self::M => "m",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub workers: usize,
}

impl RunConfig {
    /// The configuration with `axis` set to `value`.
    pub fn with_axis(&self, axis: SweepAxis, value: f64) -> Self {
        let mut c = self.clone();
        match axis {
            SweepAxis::Amplitude => c.init.amplitude = value,
            SweepAxis::Gamma => c.model.gamma = value,
            SweepAxis::P => c.model.p = value,
            SweepAxis::M => c.model.m = value,
        }
        c
    }

    /// Invariant violations that do not depend on a particular line.
    pub fn violations(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut bad = |k: &str, m: String| out.push((k.to_string(), m));
        let g = &self.grid;
        if g.n < 3 {
            bad("grid.n", format!("dimension must be at least 3, got {}", g.n));
        }
        if g.ns < 4 {
            bad("grid.ns", format!("need at least 4 radial cells, got {}", g.ns));
        }
        if g.nx < 1 {
            bad("grid.nx", "need at least 1 node per torus direction".into());
        }
        if !(g.s_min < 0.0) || !g.s_min.is_finite() {
            bad("grid.s_min", format!("must be negative, got {}", g.s_min));
        }
        if !(g.torus_length > 0.0) || !g.torus_length.is_finite() {
            bad("grid.torus_length", format!("must be positive, got {}", g.torus_length));
        }
        let m = &self.model;
        if g.n >= 3 {
            let ceiling = source_exponent_ceiling(g.n);
            if !(m.p > 2.0 && m.p < ceiling) {
                bad(
                    "model.p",
                    format!(
                        "source exponent must satisfy 2 < p < (2n-2)/(n-2) = {ceiling} for n = {}, got {}",
                        g.n, m.p
                    ),
                );
            }
        }
        if !(m.m >= 2.0) || !m.m.is_finite() {
            bad("model.m", format!("damping exponent must be at least 2, got {}", m.m));
        }
        if !m.gamma.is_finite() {
            bad("model.gamma", "must be finite".into());
        }
        if !(m.beta >= 0.0) || !m.beta.is_finite() {
            bad("model.beta", format!("source weight must be nonnegative, got {}", m.beta));
        }
        if let PotentialKind::Constant(c) = m.potential {
            if !(c >= 0.0) {
                bad("model.potential", format!("constant potential must be nonnegative, got {c}"));
            }
        }
        let s = &self.scheme;
        if let Some(dt) = s.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                bad("scheme.dt", format!("must be positive, got {dt}"));
            }
        }
        if !(s.cfl_safety > 0.0 && s.cfl_safety <= 1.0) {
            bad("scheme.cfl_safety", format!("must lie in (0, 1], got {}", s.cfl_safety));
        }
        if !(s.t_max >= 0.0) || !s.t_max.is_finite() {
            bad("scheme.t_max", format!("must be finite and nonnegative, got {}", s.t_max));
        }
        if let Some(cap) = s.blowup_cap {
            if !(cap > 0.0) {
                bad("scheme.blowup_cap", format!("must be positive, got {cap}"));
            }
        }
        if !(s.newton_tol > 0.0) {
            bad("scheme.newton_tol", format!("must be positive, got {}", s.newton_tol));
        }
        let i = &self.init;
        if !(i.amplitude >= 0.0) || !i.amplitude.is_finite() {
            bad("init.amplitude", format!("must be nonnegative, got {}", i.amplitude));
        }
        if !(i.width > 0.0) {
            bad("init.width", format!("must be positive, got {}", i.width));
        }
        if let Some(c) = i.center_s {
            if !(c > g.s_min && c < 0.0) {
                bad("init.center_s", format!("must lie in (s_min, 0), got {c}"));
            }
        }
        let level = match i.energy {
            EnergyLevel::Absolute(v) | EnergyLevel::DepthMultiple(v) => v,
        };
        if i.kind == InitKind::HighEnergy && !(level > 0.0) {
            bad("init.energy", format!("target energy must be positive, got {}", i.energy));
        }
        if self.output.record_every == 0 {
            bad("output.record_every", "must be at least 1".into());
        }
        if self.constants.restarts == 0 {
            bad("constants.restarts", "must be at least 1".into());
        }
        out
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec::new(3, 32, 8, -3.0),
            model: ModelSpec {
                p: 3.0,
                m: 2.0,
                gamma: 0.0,
                potential: PotentialKind::None,
                g: SourceProfile::Constant,
                beta: 1.0,
            },
            scheme: SchemeSpec {
                dt: None,
                cfl_safety: 0.5,
                t_max: 10.0,
                blowup_cap: None,
                newton_tol: 1e-14,
                damping: DampingScheme::ExactFlow,
                fixed_step: false,
            },
            init: InitSpec {
                kind: InitKind::Eigenmode,
                amplitude: 1.0,
                seed: 0,
                energy: EnergyLevel::DepthMultiple(2.0),
                profile: Profile::Eigenmode,
                center_s: None,
                width: 0.5,
            },
            constants: ConstantsSpec {
                restarts: 4,
                nehari_samples: 0,
            },
            output: OutputSpec {
                dir: PathBuf::from("out"),
                record_every: 10,
            },
        }
    }
}

/// Raw entries of a file: key to (line, value).
type Entries = BTreeMap<String, (usize, String)>;

fn tokenize(text: &str, errors: &mut Vec<ConfigError>) -> Entries {
    let mut entries = Entries::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            errors.push(ConfigError {
                line: Some(line),
                key: content.to_string(),
                message: "expected `key = value`".into(),
            });
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if let Some((first, _)) = entries.get(&key) {
            errors.push(ConfigError {
                line: Some(line),
                key: key.clone(),
                message: format!("duplicate key, first set on line {first}"),
            });
            continue;
        }
        entries.insert(key, (line, value));
    }
    entries
}

/// Typed access to the entries with error collection.
struct Reader {
    entries: Entries,
    used: Vec<String>,
    errors: Vec<ConfigError>,
}

impl Reader {
    fn get<T>(&mut self, key: &str, default: T, parse: impl Fn(&str) -> Result<T, String>) -> T {
        self.used.push(key.to_string());
        match self.entries.get(key) {
            None => default,
            Some((line, raw)) => match parse(raw) {
                Ok(v) => v,
                Err(message) => {
                    self.errors.push(ConfigError {
                        line: Some(*line),
                        key: key.to_string(),
                        message,
                    });
                    default
                }
            },
        }
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|(l, _)| *l)
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }
}

fn float(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("expected a number, got `{s}`"))
}

fn integer(s: &str) -> Result<usize, String> {
    s.parse::<usize>().map_err(|_| format!("expected a nonnegative integer, got `{s}`"))
}

fn seed(s: &str) -> Result<u64, String> {
    s.parse::<u64>().map_err(|_| format!("expected an unsigned 64-bit integer, got `{s}`"))
}

fn boolean(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected true or false, got `{s}`")),
    }
}

fn optional_float(s: &str) -> Result<Option<f64>, String> {
    if s == "auto" {
        Ok(None)
    } else {
        float(s).map(Some)
    }
}

fn potential(s: &str) -> Result<PotentialKind, String> {
    match s {
        "none" => Ok(PotentialKind::None),
        "v1" => Ok(PotentialKind::V1),
        "v2" => Ok(PotentialKind::V2),
        _ => match s.strip_prefix("constant:") {
            Some(c) => float(c).map(PotentialKind::Constant),
            None => Err(format!("expected none, v1, v2 or constant:<value>, got `{s}`")),
        },
    }
}

fn source_profile(s: &str) -> Result<SourceProfile, String> {
    match s {
        "constant" => Ok(SourceProfile::Constant),
        "radial-linear" => Ok(SourceProfile::RadialLinear),
        _ => Err(format!("expected constant or radial-linear, got `{s}`")),
    }
}

fn damping(s: &str) -> Result<DampingScheme, String> {
    match s {
        "exact-flow" => Ok(DampingScheme::ExactFlow),
        "implicit-euler" => Ok(DampingScheme::ImplicitEuler),
        _ => Err(format!("expected exact-flow or implicit-euler, got `{s}`")),
    }
}

fn init_kind(s: &str) -> Result<InitKind, String> {
    match s {
        "eigenmode" => Ok(InitKind::Eigenmode),
        "gaussian-bump" => Ok(InitKind::GaussianBump),
        "nehari-scaled" => Ok(InitKind::NehariScaled),
        "high-energy" | "corollary51" => Ok(InitKind::HighEnergy),
        _ => Err(format!(
            "expected eigenmode, gaussian-bump, nehari-scaled or high-energy, got `{s}`"
        )),
    }
}

fn profile(s: &str) -> Result<Profile, String> {
    match s {
        "eigenmode" => Ok(Profile::Eigenmode),
        "gaussian-bump" => Ok(Profile::GaussianBump),
        "random" => Ok(Profile::Random),
        _ => Err(format!("expected eigenmode, gaussian-bump or random, got `{s}`")),
    }
}

fn energy_level(s: &str) -> Result<EnergyLevel, String> {
    match s.strip_suffix('d') {
        Some(k) => float(k.trim()).map(EnergyLevel::DepthMultiple),
        None => float(s).map(EnergyLevel::Absolute),
    }
}

fn axis(s: &str) -> Result<SweepAxis, String> {
    match s {
        "amplitude" => Ok(SweepAxis::Amplitude),
        "gamma" => Ok(SweepAxis::Gamma),
        "p" => Ok(SweepAxis::P),
        "m" => Ok(SweepAxis::M),
        _ => Err(format!("expected amplitude, gamma, p or m, got `{s}`")),
    }
}

fn float_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| float(v.trim()))
        .collect::<Result<Vec<_>, _>>()
}

fn read_run(r: &mut Reader) -> RunConfig {
    let d = RunConfig::default();
    let grid = GridSpec {
        n: r.get("grid.n", d.grid.n, integer),
        ns: r.get("grid.ns", d.grid.ns, integer),
        nx: r.get("grid.nx", d.grid.nx, integer),
        s_min: r.get("grid.s_min", d.grid.s_min, float),
        torus_length: r.get("grid.torus_length", d.grid.torus_length, float),
    };
    let model = ModelSpec {
        p: r.get("model.p", d.model.p, float),
        m: r.get("model.m", d.model.m, float),
        gamma: r.get("model.gamma", d.model.gamma, float),
        potential: r.get("model.potential", d.model.potential, potential),
        g: r.get("model.g", d.model.g, source_profile),
        beta: r.get("model.beta", d.model.beta, float),
    };
    let scheme = SchemeSpec {
        dt: r.get("scheme.dt", d.scheme.dt, optional_float),
        cfl_safety: r.get("scheme.cfl_safety", d.scheme.cfl_safety, float),
        t_max: r.get("scheme.t_max", d.scheme.t_max, float),
        blowup_cap: r.get("scheme.blowup_cap", d.scheme.blowup_cap, optional_float),
        newton_tol: r.get("scheme.newton_tol", d.scheme.newton_tol, float),
        damping: r.get("scheme.damping", d.scheme.damping, damping),
        fixed_step: r.get("scheme.fixed_step", d.scheme.fixed_step, boolean),
    };
    let init = InitSpec {
        kind: r.get("init.kind", d.init.kind, init_kind),
        amplitude: r.get("init.amplitude", d.init.amplitude, float),
        seed: r.get("init.seed", d.init.seed, seed),
        energy: r.get("init.energy", d.init.energy, energy_level),
        profile: r.get("init.profile", d.init.profile, profile),
        center_s: r.get("init.center_s", d.init.center_s, optional_float),
        width: r.get("init.width", d.init.width, float),
    };
    let constants = ConstantsSpec {
        restarts: r.get("constants.restarts", d.constants.restarts, integer),
        nehari_samples: r.get("constants.nehari_samples", d.constants.nehari_samples, integer),
    };
    let output = OutputSpec {
        dir: r.get("output.dir", d.output.dir, |s| Ok(PathBuf::from(s))),
        record_every: r.get("output.record_every", d.output.record_every, integer),
    };
    RunConfig {
        grid,
        model,
        scheme,
        init,
        constants,
        output,
    }
}

fn finish<T>(mut r: Reader, value: T, extra: Vec<(String, String)>) -> Result<T, ConfigErrors> {
    for (key, (line, _)) in &r.entries {
        if !r.used.iter().any(|u| u == key) {
            r.errors.push(ConfigError {
                line: Some(*line),
                key: key.clone(),
                message: "unknown key".into(),
            });
        }
    }
    for (key, message) in extra {
        // a type error on the same key already explains the problem
        if r.errors.iter().any(|e| e.key == key) {
            continue;
        }
        let line = r.line_of(&key);
        r.errors.push(ConfigError { line, key, message });
    }
    if r.errors.is_empty() {
        Ok(value)
    } else {
        r.errors.sort_by_key(|e| e.line.unwrap_or(usize::MAX));
        Err(ConfigErrors(r.errors))
    }
}

fn reader(text: &str) -> Reader {
    let mut errors = Vec::new();
    let entries = tokenize(text, &mut errors);
    Reader {
        entries,
        used: Vec::new(),
        errors,
    }
}

/// Parses and validates a run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    let mut r = reader(text);
    let config = read_run(&mut r);
    let extra = config.violations();
    finish(r, config, extra)
}

/// Parses and validates a sweep configuration: a run configuration plus
/// `sweep.axis`, `sweep.values` and `sweep.workers`.
pub fn parse_sweep_config(text: &str) -> Result<SweepConfig, ConfigErrors> {
    let mut r = reader(text);
    let base = read_run(&mut r);
    let mut extra = base.violations();
    for key in ["sweep.axis", "sweep.values"] {
        if !r.has(key) {
            extra.push((key.to_string(), "required for a sweep".into()));
        }
    }
    let axis = r.get("sweep.axis", SweepAxis::Amplitude, axis);
    let values = r.get("sweep.values", Vec::new(), float_list);
    let workers = r.get("sweep.workers", 1, integer);
    if workers == 0 {
        extra.push(("sweep.workers".into(), "must be at least 1".into()));
    }
    if r.has("sweep.values") {
        let increasing = values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = values.windows(2).all(|w| w[1] < w[0]);
        if values.is_empty() {
            extra.push(("sweep.values".into(), "must not be empty".into()));
        } else if !(increasing || decreasing) {
            extra.push(("sweep.values".into(), "must be strictly ordered".into()));
        }
    }
    // each value must also give a valid run
    for &v in &values {
        for (key, message) in base.with_axis(axis, v).violations() {
            if !extra.iter().any(|(k, _)| *k == key) {
                extra.push((
                    "sweep.values".into(),
                    format!("value {v} makes {key} invalid: {message}"),
                ));
            }
        }
    }
    let config = SweepConfig {
        base,
        axis,
        values,
        workers,
    };
    finish(r, config, extra)
}

/// Serializes a run configuration in the file format, every key present.
pub fn render_config(c: &RunConfig) -> String {
    let opt = |v: Option<f64>| v.map_or("auto".to_string(), |x| format!("{x:?}"));
    let lines = [
        ("grid.n", c.grid.n.to_string()),
        ("grid.ns", c.grid.ns.to_string()),
        ("grid.nx", c.grid.nx.to_string()),
        ("grid.s_min", format!("{:?}", c.grid.s_min)),
        ("grid.torus_length", format!("{:?}", c.grid.torus_length)),
        ("model.p", format!("{:?}", c.model.p)),
        ("model.m", format!("{:?}", c.model.m)),
        ("model.gamma", format!("{:?}", c.model.gamma)),
        ("model.potential", c.model.potential.name()),
        ("model.g", c.model.g.as_str().to_string()),
        ("model.beta", format!("{:?}", c.model.beta)),
        ("scheme.dt", opt(c.scheme.dt)),
        ("scheme.cfl_safety", format!("{:?}", c.scheme.cfl_safety)),
        ("scheme.t_max", format!("{:?}", c.scheme.t_max)),
        ("scheme.blowup_cap", opt(c.scheme.blowup_cap)),
        ("scheme.newton_tol", format!("{:?}", c.scheme.newton_tol)),
        ("scheme.damping", c.scheme.damping.as_str().to_string()),
        ("scheme.fixed_step", c.scheme.fixed_step.to_string()),
        ("init.kind", c.init.kind.as_str().to_string()),
        ("init.amplitude", format!("{:?}", c.init.amplitude)),
        ("init.seed", c.init.seed.to_string()),
        ("init.energy", c.init.energy.to_string()),
        ("init.profile", c.init.profile.as_str().to_string()),
        ("init.center_s", opt(c.init.center_s)),
        ("init.width", format!("{:?}", c.init.width)),
        ("constants.restarts", c.constants.restarts.to_string()),
        ("constants.nehari_samples", c.constants.nehari_samples.to_string()),
        ("output.dir", c.output.dir.display().to_string()),
        ("output.record_every", c.output.record_every.to_string()),
    ];
    lines
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = parse_config("").unwrap();
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn reports_every_problem() {
        let text = "grid.s_min = 1.0\nmodel.p = 1.5\nbogus = 3\nmodel.m = x\n";
        let err = parse_config(text).unwrap_err();
        assert!(err.mentions("grid.s_min"));
        assert!(err.mentions("model.p"));
        assert!(err.mentions("bogus"));
        assert!(err.mentions("model.m"));
        let p = err.iter().find(|e| e.key == "model.p").unwrap();
        assert_eq!(p.line, Some(2));
        assert!(p.message.contains("2 < p < (2n-2)/(n-2)"));
    }

    #[test]
    fn energy_levels() {
        assert_eq!(energy_level("2d"), Ok(EnergyLevel::DepthMultiple(2.0)));
        assert_eq!(energy_level("0.5"), Ok(EnergyLevel::Absolute(0.5)));
        assert_eq!(init_kind("corollary51"), Ok(InitKind::HighEnergy));
    }

    #[test]
    fn sweep_values_must_be_ordered() {
        let err = parse_sweep_config("sweep.axis = amplitude\nsweep.values = 1, 3, 2\n").unwrap_err();
        assert!(err.mentions("sweep.values"));
        let ok = parse_sweep_config("sweep.axis = m\nsweep.values = 4, 3, 2\nsweep.workers = 2\n").unwrap();
        assert_eq!(ok.values, vec![4.0, 3.0, 2.0]);
    }
}
