//! Config-driven experiment runners behind the `diraclab` binary.
//!
//! A config is a TOML document. Keys are addressed by dotted path
//! (`lattice.N`), so both `lattice.N = 16` and a `[lattice]` table work.
//! Every runner validates all of its keys before computing anything and
//! returns CSV tables, optional SVG plots and a list of assertion breaches.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::em;
use crate::error::Error as ModelError;
use crate::field::{self, Band, Family, ModeAmplitudes};
use crate::fock::{self, FockOperator, ModeSpec};
use crate::grassmann::{self, EnergyForm, Generator, GrassmannAlgebra, GrassmannElement};
use crate::lattice::{Lattice, SpinorField};
use crate::observables::{self, PacketKind};
use crate::units::Units;

pub const TOOL_VERSION: &str = concat!("diraclab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ExperimentError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) | ExperimentError::Model(_) => 2,
            ExperimentError::Numerical(_) => 4,
            ExperimentError::Io(_) => 1,
        }
    }
}

type Res<T> = std::result::Result<T, ExperimentError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Evolve,
    Packet,
    Em,
    Fock,
    Grassmann,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Evolve => "evolve",
            Experiment::Packet => "packet",
            Experiment::Em => "em",
            Experiment::Fock => "fock",
            Experiment::Grassmann => "grassmann",
        }
    }

    fn parse(name: &str) -> Option<Self> {
        [
            Experiment::Evolve,
            Experiment::Packet,
            Experiment::Em,
            Experiment::Fock,
            Experiment::Grassmann,
        ]
        .into_iter()
        .find(|e| e.name() == name)
    }
}

/// A parsed config document plus its identity.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub hash: String,
    table: toml::Table,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl ExperimentConfig {
    /// Parse a config; `seed` overrides the document's `seed` key.
    pub fn parse(text: &str, seed: Option<u64>) -> Res<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| ExperimentError::Config(e.to_string()))?;
        let mut cfg = Self {
            experiment: Experiment::Evolve,
            seed: 0,
            hash: sha256_hex(text.as_bytes()),
            table,
        };
        let name = cfg.string("experiment")?;
        cfg.experiment =
            Experiment::parse(&name).ok_or_else(|| ExperimentError::Config(format!("unknown experiment `{name}`")))?;
        cfg.seed = match seed {
            Some(s) => s,
            None => cfg.opt_u64("seed")?.unwrap_or(0),
        };
        Ok(cfg)
    }

    pub fn load(path: &Path, seed: Option<u64>) -> Res<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, seed)
    }

    fn lookup(&self, key: &str) -> Option<&toml::Value> {
        let mut parts = key.split('.');
        let mut value = self.table.get(parts.next()?)?;
        for p in parts {
            value = value.as_table()?.get(p)?;
        }
        Some(value)
    }

    fn missing(key: &str) -> ExperimentError {
        ExperimentError::Config(format!("missing key `{key}`"))
    }

    fn wrong(key: &str, what: &str) -> ExperimentError {
        ExperimentError::Config(format!("key `{key}` must be {what}"))
    }

    fn opt_f64(&self, key: &str) -> Res<Option<f64>> {
        match self.lookup(key) {
            None => Ok(None),
            Some(toml::Value::Float(x)) => Ok(Some(*x)),
            Some(toml::Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(Self::wrong(key, "a number")),
        }
    }

    fn f64(&self, key: &str) -> Res<f64> {
        self.opt_f64(key)?.ok_or_else(|| Self::missing(key))
    }

    fn opt_u64(&self, key: &str) -> Res<Option<u64>> {
        match self.lookup(key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(_) => Err(Self::wrong(key, "a nonnegative integer")),
        }
    }

    fn usize(&self, key: &str) -> Res<usize> {
        Ok(self.opt_u64(key)?.ok_or_else(|| Self::missing(key))? as usize)
    }

    fn string(&self, key: &str) -> Res<String> {
        match self.lookup(key) {
            None => Err(Self::missing(key)),
            Some(toml::Value::String(s)) => Ok(s.clone()),
            Some(_) => Err(Self::wrong(key, "a string")),
        }
    }

    fn opt_string(&self, key: &str) -> Res<Option<String>> {
        match self.lookup(key) {
            None => Ok(None),
            Some(_) => self.string(key).map(Some),
        }
    }

    fn opt_bool(&self, key: &str) -> Res<Option<bool>> {
        match self.lookup(key) {
            None => Ok(None),
            Some(toml::Value::Boolean(b)) => Ok(Some(*b)),
            Some(_) => Err(Self::wrong(key, "a boolean")),
        }
    }

    fn f64_list(&self, key: &str) -> Res<Vec<f64>> {
        let arr = self
            .lookup(key)
            .ok_or_else(|| Self::missing(key))?
            .as_array()
            .ok_or_else(|| Self::wrong(key, "an array of numbers"))?;
        arr.iter()
            .map(|v| match v {
                toml::Value::Float(x) => Ok(*x),
                toml::Value::Integer(i) => Ok(*i as f64),
                _ => Err(Self::wrong(key, "an array of numbers")),
            })
            .collect()
    }

    fn opt_f64_list(&self, key: &str) -> Res<Option<Vec<f64>>> {
        match self.lookup(key) {
            None => Ok(None),
            Some(_) => self.f64_list(key).map(Some),
        }
    }

    fn usize_list(&self, key: &str) -> Res<Vec<usize>> {
        let arr = self
            .lookup(key)
            .ok_or_else(|| Self::missing(key))?
            .as_array()
            .ok_or_else(|| Self::wrong(key, "an array of integers"))?;
        arr.iter()
            .map(|v| match v {
                toml::Value::Integer(i) if *i >= 0 => Ok(*i as usize),
                _ => Err(Self::wrong(key, "an array of nonnegative integers")),
            })
            .collect()
    }

    fn units(&self, prefix: &str) -> Res<Units> {
        let units = Units {
            hbar: self.f64(&format!("{prefix}.hbar"))?,
            c: self.f64(&format!("{prefix}.c"))?,
            mass: self.f64(&format!("{prefix}.m"))?,
            charge: self.opt_f64(&format!("{prefix}.e"))?.unwrap_or(1.0),
        };
        Ok(units)
    }

    fn lattice(&self, prefix: &str, units: Units) -> Res<Lattice> {
        let n = self.usize(&format!("{prefix}.N"))?;
        let l = self.f64(&format!("{prefix}.L"))?;
        Lattice::new(n, l, units).map_err(|e| ExperimentError::Config(e.to_string()))
    }
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

/// A table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Column index by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn floats(&self, name: &str) -> Vec<f64> {
        let Some(c) = self.column(name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .filter_map(|r| match r[c] {
                Cell::Float(x) => Some(x),
                _ => None,
            })
            .collect()
    }

    fn first_non_finite(&self) -> Option<String> {
        for (i, row) in self.rows.iter().enumerate() {
            for (h, cell) in self.header.iter().zip(row) {
                if let Cell::Float(x) = cell {
                    if !x.is_finite() {
                        return Some(format!("row {i}, column {h} is {x}"));
                    }
                }
            }
        }
        None
    }

    /// Header, `#` metadata lines, then rows; floats with 17 significant digits.
    pub fn render(&self, metadata: &[(String, String)]) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for (k, v) in metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Float(x) => format!("{x:.16e}"),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub experiment: Experiment,
    pub metadata: Vec<(String, String)>,
    /// `(file name, table)`; the first entry is `report.csv`.
    pub tables: Vec<(String, CsvTable)>,
    /// `(file name, svg document)`.
    pub plots: Vec<(String, String)>,
    /// Human-readable tolerance breaches.
    pub breaches: Vec<String>,
}

impl RunReport {
    fn new(cfg: &ExperimentConfig) -> Self {
        Self {
            experiment: cfg.experiment,
            metadata: vec![
                ("experiment".into(), cfg.experiment.name().into()),
                ("config_sha256".into(), cfg.hash.clone()),
                ("seed".into(), cfg.seed.to_string()),
                ("tool".into(), TOOL_VERSION.into()),
            ],
            tables: Vec::new(),
            plots: Vec::new(),
            breaches: Vec::new(),
        }
    }

    pub fn table(&self, name: &str) -> Option<&CsvTable> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    fn check(&mut self, what: &str, value: f64, tolerance: f64) {
        if value.is_nan() || value > tolerance {
            self.breaches.push(format!("{what}: {value:e} exceeds {tolerance:e}"));
        }
    }

    fn finish(self) -> Res<Self> {
        for (name, t) in &self.tables {
            if let Some(msg) = t.first_non_finite() {
                return Err(ExperimentError::Numerical(format!("{name}: {msg}")));
            }
        }
        Ok(self)
    }

    /// Write every table and plot into `dir`.
    pub fn write(&self, dir: &Path) -> Res<()> {
        std::fs::create_dir_all(dir).map_err(|e| ExperimentError::Io(e.to_string()))?;
        for (name, table) in &self.tables {
            std::fs::write(dir.join(name), table.render(&self.metadata))
                .map_err(|e| ExperimentError::Io(e.to_string()))?;
        }
        for (name, svg) in &self.plots {
            std::fs::write(dir.join(name), svg).map_err(|e| ExperimentError::Io(e.to_string()))?;
        }
        Ok(())
    }
}

/// Run the experiment named in the config.
pub fn run(cfg: &ExperimentConfig) -> Res<RunReport> {
    match cfg.experiment {
        Experiment::Evolve => run_evolve(cfg),
        Experiment::Packet => run_packet(cfg),
        Experiment::Em => run_em(cfg),
        Experiment::Fock => run_fock(cfg),
        Experiment::Grassmann => run_grassmann(cfg),
    }
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

struct EvolveParams {
    lattice: Lattice,
    t0: f64,
    dt: f64,
    steps: usize,
    band: Band,
    corrupt: Option<(usize, f64)>,
    tol_conservation: f64,
    tol_continuity: f64,
    tol_dirac: f64,
}

fn evolve_params(cfg: &ExperimentConfig) -> Res<EvolveParams> {
    let units = cfg.units("lattice")?;
    let lattice = cfg.lattice("lattice", units)?;
    let band = match cfg.opt_string("modes.band")?.as_deref() {
        None | Some("dealiased") => Band::Dealiased,
        Some("full") => Band::Full,
        Some(_) => return Err(ExperimentConfig::wrong("modes.band", "\"dealiased\" or \"full\"")),
    };
    let corrupt = match cfg.opt_u64("corrupt.step")? {
        Some(step) => Some((step as usize, cfg.opt_f64("corrupt.factor")?.unwrap_or(1.5))),
        None => None,
    };
    Ok(EvolveParams {
        lattice,
        t0: cfg.f64("time.t0")?,
        dt: cfg.f64("time.dt")?,
        steps: cfg.usize("time.steps")?,
        band,
        corrupt,
        tol_conservation: cfg.opt_f64("assert.conservation")?.unwrap_or(1e-10),
        tol_continuity: cfg.opt_f64("assert.continuity")?.unwrap_or(1e-9),
        tol_dirac: cfg.opt_f64("assert.dirac")?.unwrap_or(1e-10),
    })
}

/// Observables of both theories along an exact trajectory.
pub fn run_evolve(cfg: &ExperimentConfig) -> Res<RunReport> {
    let p = evolve_params(cfg)?;
    let lat = &p.lattice;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let base = ModeAmplitudes::random(lat, &mut rng, p.band);

    let mut table = CsvTable::new(&[
        "step",
        "t",
        "E_original",
        "E_revised",
        "Q_original",
        "Q_revised",
        "N_e",
        "N_p",
        "duality_residual",
        "continuity_original",
        "continuity_electron",
        "continuity_positron",
        "dirac_residual",
    ]);
    let mut report = RunReport::new(cfg);
    let mut first: Option<observables::ObservableReport> = None;
    for step in 0..=p.steps {
        let t = p.t0 + step as f64 * p.dt;
        let mut modes = base.clone();
        if let Some((at, factor)) = p.corrupt {
            if step >= at {
                modes.b[0][lat.index([1, 0, 0])] *= factor;
            }
        }
        let mode_sum = observables::observable_report(lat, &modes);
        let spatial = observables::observable_report_spatial(lat, &modes, t);
        let duality = [
            relative(mode_sum.e_original, spatial.e_original),
            relative(mode_sum.e_revised, spatial.e_revised),
            relative(mode_sum.q_original, spatial.q_original),
            relative(mode_sum.q_revised, spatial.q_revised),
            relative(mode_sum.n_electron, spatial.n_electron),
            relative(mode_sum.n_positron, spatial.n_positron),
        ]
        .into_iter()
        .fold(0.0, f64::max);

        let split = field::split_modes(lat, &modes, t);
        let state = field::FieldState {
            psi: split.recombine(),
            t,
        };
        let original = observables::four_current_original(lat, &state);
        let (electron, positron) = observables::four_current_revised(lat, &split);
        let cont =
            [&original, &electron, &positron].map(|c| observables::continuity_residual(lat, c, &modes, t).relative());
        let norm = state.psi.l2_norm(lat);
        let dirac = field::dirac_residual(lat, &modes, t) / norm.max(f64::MIN_POSITIVE);

        let reference = *first.get_or_insert(spatial);
        let drift = [
            relative(spatial.e_original, reference.e_original),
            relative(spatial.e_revised, reference.e_revised),
            relative(spatial.q_original, reference.q_original),
            relative(spatial.q_revised, reference.q_revised),
            relative(spatial.n_electron, reference.n_electron),
            relative(spatial.n_positron, reference.n_positron),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        report.check(&format!("step {step} conservation drift"), drift, p.tol_conservation);
        report.check(
            &format!("step {step} mode/spatial duality"),
            duality,
            p.tol_conservation,
        );
        for (name, v) in ["original", "electron", "positron"].iter().zip(cont) {
            report.check(&format!("step {step} {name} continuity"), v, p.tol_continuity);
        }
        report.check(&format!("step {step} dirac residual"), dirac, p.tol_dirac);

        table.push(vec![
            step.into(),
            t.into(),
            spatial.e_original.into(),
            spatial.e_revised.into(),
            spatial.q_original.into(),
            spatial.q_revised.into(),
            spatial.n_electron.into(),
            spatial.n_positron.into(),
            duality.into(),
            cont[0].into(),
            cont[1].into(),
            cont[2].into(),
            dirac.into(),
        ]);
    }
    report.tables.push(("report.csv".into(), table));
    report.finish()
}

struct PacketParams {
    lattice: Lattice,
    sigmas: Vec<f64>,
    bins: usize,
    spin: Option<(Lattice, f64)>,
    g_band: [f64; 2],
    svg: bool,
}

fn packet_params(cfg: &ExperimentConfig) -> Res<PacketParams> {
    let units = cfg.units("lattice")?;
    let lattice = cfg.lattice("lattice", units)?;
    let sigmas = cfg.f64_list("packet.sigmas")?;
    if sigmas.is_empty() {
        return Err(ExperimentConfig::wrong("packet.sigmas", "a nonempty array"));
    }
    let required = |lat: &Lattice, s: f64, key: &str| -> Res<()> {
        if !(s.is_finite() && s > 0.0) {
            return Err(ExperimentError::Config(format!("`{key}` contains invalid width {s}")));
        }
        let need = s.min(units.compton_length()) / 3.0;
        if lat.spacing() > need {
            return Err(ExperimentError::Config(format!(
                "`{key}` width {s} is not resolved: spacing {} exceeds {need}",
                lat.spacing()
            )));
        }
        Ok(())
    };
    for &s in &sigmas {
        required(&lattice, s, "packet.sigmas")?;
    }
    let spin = match cfg.opt_f64("spin.sigma")? {
        Some(s) => {
            let lat = cfg.lattice("spin", units)?;
            required(&lat, s, "spin.sigma")?;
            Some((lat, s))
        }
        None => None,
    };
    let g_band = match cfg.opt_f64_list("spin.g_band")? {
        Some(v) if v.len() == 2 => [v[0], v[1]],
        Some(_) => return Err(ExperimentConfig::wrong("spin.g_band", "two numbers")),
        None => [1.9, 2.1],
    };
    Ok(PacketParams {
        lattice,
        sigmas,
        bins: cfg.opt_u64("packet.profile_bins")?.unwrap_or(32) as usize,
        spin,
        g_band,
        svg: cfg.opt_bool("packet.svg")?.unwrap_or(false),
    })
}

/// Width sweep, radial profiles and the spin diagnostics of Gaussian packets.
pub fn run_packet(cfg: &ExperimentConfig) -> Res<RunReport> {
    let p = packet_params(cfg)?;
    let lat = &p.lattice;
    let mut report = RunReport::new(cfg);
    let mut table = CsvTable::new(&["record", "sigma", "rms_radius", "mu_z", "l_z", "g_ratio"]);
    let mut profile = CsvTable::new(&["sigma", "r", "density"]);
    let mut curves = Vec::new();
    let mut sweep = Vec::new();
    let center = [lat.length() / 2.0; 3];
    for &sigma in &p.sigmas {
        let modes = observables::build_packet(lat, center, sigma, 0, PacketKind::Electron)?;
        let split = field::split_modes(lat, &modes, 0.0);
        let (electron, _) = observables::four_current_revised(lat, &split);
        let width = observables::packet_width(lat, &electron.rho)?;
        let blank = || Cell::Text(String::new());
        table.push(vec![
            "sweep".into(),
            sigma.into(),
            width.into(),
            blank(),
            blank(),
            blank(),
        ]);
        let prof = observables::radial_profile(lat, &electron.rho, p.bins)?;
        for &(r, v) in &prof {
            profile.push(vec![sigma.into(), r.into(), v.into()]);
        }
        curves.push((format!("σ = {sigma}"), prof));
        sweep.push((sigma, width));
    }
    if let Some((spin_lat, sigma)) = &p.spin {
        let c = [spin_lat.length() / 2.0; 3];
        let modes = observables::build_packet(spin_lat, c, *sigma, 0, PacketKind::Electron)?;
        let split = field::split_modes(spin_lat, &modes, 0.0);
        let s = observables::spin_diagnostics(spin_lat, &split)?;
        table.push(vec![
            "spin".into(),
            (*sigma).into(),
            s.rms_radius.into(),
            s.mu_z.into(),
            s.l_z.into(),
            s.g_ratio.into(),
        ]);
        if !(s.g_ratio >= p.g_band[0] && s.g_ratio <= p.g_band[1]) {
            report.breaches.push(format!(
                "g_ratio {} outside [{}, {}]",
                s.g_ratio, p.g_band[0], p.g_band[1]
            ));
        }
    }
    if p.svg {
        report.plots.push((
            "width.svg".into(),
            svg_plot(
                "rms radius vs target width",
                "σ",
                "rms radius",
                &[("sweep".into(), sweep)],
            ),
        ));
        report.plots.push((
            "profile.svg".into(),
            svg_plot("radial charge profile", "r", "|ρ|", &curves),
        ));
    }
    report.tables.push(("report.csv".into(), table));
    report.tables.push(("profile.csv".into(), profile));
    report.finish()
}

struct EmParams {
    lattice: Lattice,
    samples: usize,
    dt: f64,
    wave_m: i64,
    amplitude: f64,
    tolerance: f64,
}

fn em_params(cfg: &ExperimentConfig) -> Res<EmParams> {
    let units = cfg.units("lattice")?;
    let lattice = cfg.lattice("lattice", units)?;
    let wave_m = cfg.usize("em.wave_m")? as i64;
    if wave_m == 0 || wave_m >= (lattice.n() / 2) as i64 {
        return Err(ExperimentConfig::wrong("em.wave_m", "between 1 and N/2 - 1"));
    }
    Ok(EmParams {
        lattice,
        samples: cfg.usize("em.samples")?,
        dt: cfg.f64("time.dt")?,
        wave_m,
        amplitude: cfg.f64("em.amplitude")?,
        tolerance: cfg.opt_f64("assert.identity")?.unwrap_or(1e-10),
    })
}

fn phi_max_diff(a: &em::PhiField, b: &em::PhiField) -> f64 {
    a.phi.sub(&b.phi).max_abs() / a.phi.max_abs().max(f64::MIN_POSITIVE)
}

/// Energy identity, photon numbers and evolution agreement of the EM analog.
pub fn run_em(cfg: &ExperimentConfig) -> Res<RunReport> {
    let p = em_params(cfg)?;
    let lat = &p.lattice;
    let units = *lat.units();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = RunReport::new(cfg);
    let mut table = CsvTable::new(&[
        "record",
        "index",
        "E_standard",
        "E_phi",
        "E_particle",
        "identity_residual",
        "N_gamma",
        "N_gammabar",
        "evolve_residual",
    ]);
    let mut row = |record: &str, index: usize, state: &em::EMState, report: &mut RunReport| -> Res<()> {
        let e = em::em_energies(lat, state)?;
        let phi = em::phi_from_em(lat, state)?;
        let (n, nbar) = em::photon_number(lat, &phi);
        let via_phi = em::phi_evolve(lat, &phi, p.dt);
        let via_maxwell = em::phi_from_em(lat, &em::maxwell_evolve(lat, state, p.dt))?;
        let evolve = phi_max_diff(&via_phi, &via_maxwell);
        let identity = relative(e.standard, e.phi).max(relative(e.standard, e.particle));
        report.check(&format!("{record} {index} energy identity"), identity, p.tolerance);
        report.check(&format!("{record} {index} evolution"), evolve, p.tolerance);
        table.push(vec![
            record.into(),
            index.into(),
            e.standard.into(),
            e.phi.into(),
            e.particle.into(),
            identity.into(),
            n.into(),
            nbar.into(),
            evolve.into(),
        ]);
        Ok(())
    };
    for i in 0..p.samples {
        let state = em::random_free_field(lat, &mut rng);
        row("random", i, &state, &mut report)?;
    }
    let circular = em::circular_wave(lat, p.amplitude, p.wave_m);
    row("circular", 0, &circular, &mut report)?;
    row("linear", 0, &em::linear_wave(lat, p.amplitude, p.wave_m), &mut report)?;

    // N_γ ħck = U for the circular wave.
    let k = 2.0 * std::f64::consts::PI * p.wave_m as f64 / lat.length();
    let phi = em::phi_from_em(lat, &circular)?;
    let (n, _) = em::photon_number(lat, &phi);
    let u = em::em_energies(lat, &circular)?.standard;
    report.check(
        "circular photon number",
        relative(n * units.hbar * units.c * k, u),
        p.tolerance,
    );
    report.tables.push(("report.csv".into(), table));
    report.finish()
}

struct FockParams {
    spec: ModeSpec,
    units: Units,
    tolerance: f64,
}

fn fock_params(cfg: &ExperimentConfig) -> Res<FockParams> {
    let b = cfg.f64_list("fock.b_energies")?;
    let c = cfg.f64_list("fock.c_energies")?;
    let spec = ModeSpec::with_energies(&b, &c).map_err(|e| ExperimentError::Config(e.to_string()))?;
    let units = Units {
        charge: cfg.opt_f64("fock.e")?.unwrap_or(1.0),
        ..Units::default()
    };
    Ok(FockParams {
        spec,
        units,
        tolerance: cfg.opt_f64("assert.exact")?.unwrap_or(0.0),
    })
}

/// Largest deviation of all canonical anticommutators among `ops`, where
/// `ops` lists annihilators.
pub fn anticommutator_defect(ops: &[&FockOperator]) -> f64 {
    let Some(first) = ops.first() else {
        return 0.0;
    };
    let dim = first.dim();
    let identity = FockOperator::identity(dim);
    let zero = FockOperator::zero(dim);
    let mut worst: f64 = 0.0;
    for (i, a) in ops.iter().enumerate() {
        for (j, b) in ops.iter().enumerate() {
            let expected = if i == j { &identity } else { &zero };
            worst = worst.max(a.anticommutator(&b.adjoint()).max_abs_diff(expected));
            worst = worst.max(a.anticommutator(b).max_abs());
        }
    }
    worst
}

/// Operator identities and spectra of both quantization routes.
pub fn run_fock(cfg: &ExperimentConfig) -> Res<RunReport> {
    let p = fock_params(cfg)?;
    let spec = &p.spec;
    let cs = fock::build_space(spec);
    let ds = fock::build_d_space(spec);
    let dim = spec.dim();
    let mb = spec.b_slots().len();
    let mc = spec.c_slots().len();

    let mut c_ops: Vec<&FockOperator> = (0..mb).map(|k| cs.0.b(k)).collect();
    c_ops.extend((0..mc).map(|k| cs.c(k)));
    let d_ops_owned: Vec<FockOperator> = (0..mc).map(|k| cs.d(k)).collect();
    let mut d_ops: Vec<&FockOperator> = (0..mb).map(|k| cs.0.b(k)).collect();
    d_ops.extend(d_ops_owned.iter());

    let h_naive = fock::hamiltonian_naive(&cs);
    let h_normal = fock::hamiltonian_normal(&cs);
    let h_direct = fock::hamiltonian_direct(&ds);
    let q_naive = fock::charge_naive(&cs, &p.units);
    let q_normal = fock::charge_normal(&cs, &p.units);
    let sea: f64 = spec.c_slots().iter().map(|s| s.energy).sum();
    let id = FockOperator::identity(dim);

    let relabel_ops = (0..mc)
        .map(|k| fock::relabel(spec, &cs.c_dag(k)).max_abs_diff(ds.d(k)))
        .chain((0..mb).map(|k| fock::relabel(spec, cs.0.b(k)).max_abs_diff(ds.0.b(k))))
        .fold(0.0, f64::max);

    let checks: Vec<(&str, f64)> = vec![
        ("anticommutators_bc", anticommutator_defect(&c_ops)),
        ("anticommutators_bd", anticommutator_defect(&d_ops)),
        (
            "hamiltonian_shift",
            h_naive.max_abs_diff(&h_normal.sub(&id.scale_real(sea))),
        ),
        (
            "charge_shift",
            q_naive.max_abs_diff(&q_normal.sub(&id.scale_real(p.units.charge * mc as f64))),
        ),
        (
            "charge_hamiltonian_commutator",
            q_normal.commutator(&h_normal).max_abs(),
        ),
        ("naive_charge_commutator", q_naive.commutator(&h_naive).max_abs()),
        (
            "route_identity_hamiltonian",
            fock::relabel(spec, &h_normal).max_abs_diff(&h_direct),
        ),
        ("route_identity_operators", relabel_ops),
        ("vacuum_energy", h_normal.expectation(cs.vacuum()).norm()),
    ];
    let mut report = RunReport::new(cfg);
    let mut table = CsvTable::new(&["check", "value"]);
    for (name, v) in &checks {
        table.push(vec![(*name).into(), (*v).into()]);
        report.check(name, *v, p.tolerance);
    }
    let mut spectrum = CsvTable::new(&["operator", "index", "eigenvalue"]);
    for (name, op) in [
        ("hamiltonian_naive", &h_naive),
        ("hamiltonian_normal", &h_normal),
        ("hamiltonian_direct", &h_direct),
        ("charge_naive", &q_naive),
        ("charge_normal", &q_normal),
    ] {
        for (i, e) in fock::spectrum(op)?.into_iter().enumerate() {
            spectrum.push(vec![name.into(), i.into(), e.into()]);
        }
    }
    report.tables.push(("report.csv".into(), table));
    report.tables.push(("spectrum.csv".into(), spectrum));
    report.finish()
}

struct GrassmannParams {
    lattice: Lattice,
    sites: Vec<usize>,
    samples: usize,
    tolerance: f64,
    field_tolerance: f64,
}

fn grassmann_params(cfg: &ExperimentConfig) -> Res<GrassmannParams> {
    let units = cfg.units("lattice")?;
    let lattice = cfg.lattice("lattice", units)?;
    let sites = cfg.usize_list("grassmann.sites")?;
    if 4 * sites.len() > grassmann::MAX_PAIRS {
        return Err(ExperimentConfig::wrong("grassmann.sites", "at most 6 sites"));
    }
    if let Some(&bad) = sites.iter().find(|&&s| s >= lattice.sites()) {
        return Err(ExperimentError::Config(format!(
            "`grassmann.sites` entry {bad} is off the lattice"
        )));
    }
    Ok(GrassmannParams {
        lattice,
        sites,
        samples: cfg.opt_u64("grassmann.samples")?.unwrap_or(8) as usize,
        tolerance: cfg.opt_f64("assert.exact")?.unwrap_or(0.0),
        field_tolerance: cfg.opt_f64("assert.field")?.unwrap_or(1e-13),
    })
}

/// Random element with up to `terms` monomials.
pub fn random_element<R: Rng>(algebra: GrassmannAlgebra, rng: &mut R, terms: usize) -> GrassmannElement {
    let mut out = algebra.zero();
    let gens = algebra.generators();
    for _ in 0..terms {
        let mut mono = algebra.one();
        for g in 0..gens {
            if rng.random_bool(0.15) {
                let gen = if g < algebra.pairs() {
                    Generator::Alpha(g)
                } else {
                    Generator::AlphaStar(g - algebra.pairs())
                };
                mono = mono
                    .multiply(&algebra.generator(gen).expect("index in range"))
                    .expect("same algebra");
            }
        }
        let c = Complex64::new(rng.random_range(-4..=4) as f64, rng.random_range(-4..=4) as f64) * 0.25;
        out = out.add(&mono.scale(c)).expect("same algebra");
    }
    out
}

/// Generator and field-operator identities of the Grassmann lift.
pub fn run_grassmann(cfg: &ExperimentConfig) -> Res<RunReport> {
    let p = grassmann_params(cfg)?;
    let lat = &p.lattice;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let modes = ModeAmplitudes::random(lat, &mut rng, Band::Full);
    let t = 0.0;
    let psi = field::synthesize_family(lat, &modes, t, Family::Both);
    let lifted = grassmann::lift_field(&psi, &p.sites)?;
    let alg = lifted.algebra();
    let n = alg.pairs();
    let samples: Vec<GrassmannElement> = (0..p.samples).map(|_| random_element(alg, &mut rng, 6)).collect();

    let gens: Vec<GrassmannElement> = (0..n)
        .map(|k| alg.alpha(k))
        .chain((0..n).map(|k| alg.alpha_star(k)))
        .collect::<Result<_, _>>()?;
    let mut generator_ac: f64 = 0.0;
    for a in &gens {
        for b in &gens {
            let s = a.multiply(b)?.add(&b.multiply(a)?)?;
            generator_ac = generator_ac.max(s.max_abs_diff(&alg.zero()));
        }
    }

    // {∂_k, α_j} Ψ = δ_kj Ψ
    let mut derivative_ac: f64 = 0.0;
    let mut field_ac: f64 = 0.0;
    let mut field_same: f64 = 0.0;
    let mut field_dd: f64 = 0.0;
    for x in &samples {
        for k in 0..n {
            for j in 0..n {
                let aj = alg.alpha(j)?;
                let lhs = aj
                    .multiply(x)?
                    .derivative(Generator::Alpha(k))?
                    .add(&aj.multiply(&x.derivative(Generator::Alpha(k))?)?)?;
                let expected = if j == k { x.clone() } else { alg.zero() };
                derivative_ac = derivative_ac.max(lhs.max_abs_diff(&expected));

                let mult_then_d = lifted.field_derivative(j, &lifted.field_operator(k, x)?)?;
                let d_then_mult = lifted.field_operator(k, &lifted.field_derivative(j, x)?)?;
                let ac = mult_then_d.add(&d_then_mult)?;
                field_ac = field_ac.max(ac.max_abs_diff(&expected));

                let same = lifted
                    .field_operator(k, &lifted.field_operator(j, x)?)?
                    .add(&lifted.field_operator(j, &lifted.field_operator(k, x)?)?)?;
                field_same = field_same.max(same.max_abs_diff(&alg.zero()));

                let dd = lifted
                    .field_derivative(k, &lifted.field_derivative(j, x)?)?
                    .add(&lifted.field_derivative(j, &lifted.field_derivative(k, x)?)?)?;
                field_dd = field_dd.max(dd.max_abs_diff(&alg.zero()));
            }
        }
    }

    let mut nilpotent: f64 = 0.0;
    for k in 0..n {
        let pair = alg.alpha_star(k)?.multiply(&alg.alpha(k)?)?;
        nilpotent = nilpotent.max(pair.multiply(&pair)?.max_abs_diff(&alg.zero()));
    }
    // Even elements commute with every generator.
    let mut charge_commutator: f64 = 0.0;
    for slot in 0..p.sites.len() {
        let rho = lifted.charge_density(slot, lat.units().charge)?;
        for g in &gens {
            let c = rho.multiply(g)?.sub(&g.multiply(&rho)?)?;
            charge_commutator = charge_commutator.max(c.max_abs_diff(&alg.zero()));
        }
    }

    let main = grassmann::grassmann_energy(lat, &modes, t, &p.sites, EnergyForm::Main)?;
    let reordered = grassmann::grassmann_energy(lat, &modes, t, &p.sites, EnergyForm::Reordered)?;
    let energy_forms = main.max_abs_diff(&reordered);

    let mut restored = SpinorField::zeros(lat);
    lifted.unlift_into(&mut restored);
    let roundtrip = p
        .sites
        .iter()
        .flat_map(|&s| (0..4).map(move |i| (s, i)))
        .map(|(s, i)| (restored.planes[i][s] - psi.planes[i][s]).norm())
        .fold(0.0, f64::max);

    let checks: Vec<(&str, f64)> = vec![
        ("generator_anticommutators", generator_ac),
        ("derivative_anticommutators", derivative_ac),
        ("pair_nilpotency", nilpotent),
        ("charge_density_commutator", charge_commutator),
        ("field_mixed_anticommutators", field_ac),
        ("field_anticommutators", field_same),
        ("derivative_pair_anticommutators", field_dd),
        ("energy_form_difference", energy_forms),
        ("lift_roundtrip", roundtrip),
    ];
    let mut report = RunReport::new(cfg);
    let mut table = CsvTable::new(&["check", "value"]);
    for (name, v) in &checks {
        table.push(vec![(*name).into(), (*v).into()]);
        let tol = if name.starts_with("field_") || name.starts_with("derivative_pair") {
            p.field_tolerance
        } else {
            p.tolerance
        };
        report.check(name, *v, tol);
    }
    report.tables.push(("report.csv".into(), table));
    report.finish()
}

/// Minimal SVG line plot of one or more `(x, y)` series.
pub fn svg_plot(title: &str, xlabel: &str, ylabel: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let (w, h, m) = (640.0, 400.0, 50.0);
    let pts = series.iter().flat_map(|(_, s)| s.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1.partial_cmp(&x0) != Some(std::cmp::Ordering::Greater) {
        x1 = x0 + 1.0;
    }
    if y1.partial_cmp(&y0) != Some(std::cmp::Ordering::Greater) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle">{title}</text>"#,
        w / 2.0
    );
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{}" x2="{}" y2="{}" stroke="black"/><line x1="{m}" y1="{m}" x2="{m}" y2="{}" stroke="black"/>"#,
        h - m,
        w - m,
        h - m,
        h - m
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{xlabel} [{x0:.3}, {x1:.3}]</text>"#,
        w / 2.0,
        h - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="12" y="{}" transform="rotate(-90 12 {})" text-anchor="middle">{ylabel} [{y0:.3}, {y1:.3}]</text>"#,
        h / 2.0,
        h / 2.0
    );
    for (i, (name, s)) in series.iter().enumerate() {
        let color = colors[i % colors.len()];
        let points: Vec<String> = s.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" points="{}"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#,
            w - m - 100.0,
            m + 16.0 * i as f64
        );
    }
    out.push_str("</svg>\n");
    out
}
