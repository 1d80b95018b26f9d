//! Command-line surface: run configurations, the seven verbs and run
//! manifests. A run is a pure function of its [`RunConfig`]; wall time goes
//! to `timing.txt` so every JSON and CSV artifact is reproducible byte for
//! byte.

use std::ffi::OsString;
use std::fs;
use std::io::BufReader;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::approx::{dyadic_ladder, error_curve, smooth_bandlimit, transfer_certificate, write_curve_csv};
use crate::cartoon::{boundary_regularity_estimate, generate_cartoon, CartoonSpec};
use crate::consistency::{saturation_ladder, write_ladder_csv, LadderConfig, Verdict};
use crate::error::{invalid, Error, Result};
use crate::frame::max_admissible_scales;
use crate::gramian::{frame_lp_crossnorm_bound, sample_gramian, verify_decay, write_samples_csv, DecayConfig, SamplerPolicy};
use crate::grid::{read_image, write_atomic, write_image};
use crate::molecule::{check_generator, CheckConfig, PROXY_ORDER};
use crate::param::angular_level;
use crate::{CoefficientSet, Frame, FrameSpec, FrequencyGrid, Image};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "ALPHAMOL_OUT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    BuildFrame,
    Transform,
    Gramian,
    Consistency,
    Cartoon,
    Nterm,
    MoleculeCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::BuildFrame => "build-frame",
            Command::Transform => "transform",
            Command::Gramian => "gramian",
            Command::Consistency => "consistency",
            Command::Cartoon => "cartoon",
            Command::Nterm => "nterm",
            Command::MoleculeCheck => "molecule-check",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Analyze,
    /// Canonical-dual reconstruction from a coefficient CSV.
    Synthesize,
    RoundTrip,
}

/// Everything a run depends on. A frame with `scales: 0` stands for the
/// largest admissible `J` on the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub frame: FrameSpec,
    /// Second system for `gramian` and `consistency`.
    pub frame_b: FrameSpec,
    /// Systems compared by `nterm`; the first two also give the transfer
    /// certificate.
    pub frames: Vec<FrameSpec>,
    pub seeds: Vec<u64>,
    pub input: Option<PathBuf>,
    pub coefficients: Option<PathBuf>,
    pub direction: Direction,
    pub pairs: usize,
    pub min_scale: i32,
    pub target_order: f64,
    pub ks: Vec<f64>,
    pub start_scale: i32,
    pub rungs: usize,
    pub beta: f64,
    pub ladder_lo: u32,
    pub ladder_hi: u32,
    pub p: f64,
    /// Required `exponent(first) <= exponent(last) - gap` in `nterm`.
    pub expect_gap: Option<f64>,
    pub derivative_levels: u32,
    pub molecule_scales: i32,
    /// Not part of the config hash.
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::BuildFrame,
            n: 256,
            frame: FrameSpec::Curvelet { alpha: 0.5, scales: 6 },
            frame_b: FrameSpec::Shearlet { beta: 2.0, c: 1.0, scales: 6 },
            frames: vec![
                FrameSpec::Curvelet { alpha: 0.5, scales: 0 },
                FrameSpec::Shearlet { beta: 2.0, c: 1.0, scales: 0 },
                FrameSpec::Wavelet { sigma: 2.0, tau: 1.0, scales: 0 },
            ],
            seeds: vec![0],
            input: None,
            coefficients: None,
            direction: Direction::RoundTrip,
            pairs: 1000,
            min_scale: 0,
            target_order: 2.0,
            ks: vec![2.5, 1.0],
            start_scale: 2,
            rungs: 6,
            beta: 2.0,
            ladder_lo: 6,
            ladder_hi: 14,
            p: 0.75,
            expect_gap: None,
            derivative_levels: 2,
            molecule_scales: 6,
            out_dir: None,
        }
    }
}

impl RunConfig {
    /// Hex SHA-256 of the canonical JSON form, with `out_dir` cleared.
    pub fn hash(&self) -> String {
        let canonical = RunConfig { out_dir: None, ..self.clone() };
        let bytes = serde_json::to_vec(&canonical).expect("config serializes");
        format!("{:x}", Sha256::digest(&bytes))
    }

    fn grid(&self) -> Result<FrequencyGrid> {
        FrequencyGrid::new(self.n)
    }

    fn output_dir(&self) -> PathBuf {
        match &self.out_dir {
            Some(d) => d.clone(),
            None => {
                let root = std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| "alphamol-out".into());
                root.join(self.command.name())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Command,
    pub config_sha256: String,
    pub tool_version: String,
    /// Artifact paths relative to the output directory.
    pub artifacts: Vec<String>,
    pub summary: Value,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub manifest: RunManifest,
}

impl RunOutcome {
    /// 0 when the verdict passed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.manifest.pass {
            0
        } else {
            2
        }
    }
}

/// Parse `curvelet:ALPHA:J`, `shearlet:BETA:C:J` or `wavelet:SIGMA:TAU:J`.
pub fn parse_frame_spec(s: &str) -> Result<FrameSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> Result<f64> {
        parts
            .get(i)
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| invalid(format!("frame '{s}': field {i} is not a number")))
    };
    let scales = |i: usize| -> Result<u32> {
        parts
            .get(i)
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| invalid(format!("frame '{s}': field {i} is not a scale count")))
    };
    let (want, spec) = match parts[0] {
        "curvelet" => (3, FrameSpec::Curvelet { alpha: num(1)?, scales: scales(2)? }),
        "shearlet" => (4, FrameSpec::Shearlet { beta: num(1)?, c: num(2)?, scales: scales(3)? }),
        "wavelet" => (4, FrameSpec::Wavelet { sigma: num(1)?, tau: num(2)?, scales: scales(3)? }),
        other => return Err(invalid(format!("unknown frame family '{other}'"))),
    };
    if parts.len() != want {
        return Err(invalid(format!("frame '{s}': expected {want} fields")));
    }
    Ok(spec)
}

fn frame_arg(s: &str) -> std::result::Result<FrameSpec, String> {
    parse_frame_spec(s).map_err(|e| e.to_string())
}

/// Flags override the config file, which overrides the defaults.
#[derive(Debug, Parser)]
#[command(name = "alphamol", version, about = "Alpha-molecule frame experiments")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (default: $ALPHAMOL_OUT/<command>).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// e.g. curvelet:0.5:6, shearlet:2:1:6, wavelet:2:1:6 (J = 0: largest admissible).
    #[arg(long, value_parser = frame_arg)]
    pub frame: Option<FrameSpec>,
    #[arg(long, value_parser = frame_arg)]
    pub frame_b: Option<FrameSpec>,
    #[arg(long, value_parser = frame_arg, value_delimiter = ',')]
    pub frames: Option<Vec<FrameSpec>>,
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub coefficients: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub direction: Option<Direction>,
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub min_scale: Option<i32>,
    #[arg(long)]
    pub target_order: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<f64>>,
    #[arg(long)]
    pub start_scale: Option<i32>,
    #[arg(long)]
    pub rungs: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub ladder_lo: Option<u32>,
    #[arg(long)]
    pub ladder_hi: Option<u32>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub expect_gap: Option<f64>,
    #[arg(long)]
    pub derivative_levels: Option<u32>,
    #[arg(long)]
    pub molecule_scales: Option<i32>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => serde_json::from_slice::<RunConfig>(&fs::read(path)?)?,
            None => RunConfig::default(),
        };
        cfg.command = self.command;
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { cfg.$field = v; })* };
        }
        set!(n, frame, frame_b, frames, seeds, direction, pairs, min_scale, target_order, ks);
        set!(start_scale, rungs, beta, ladder_lo, ladder_hi, p, derivative_levels, molecule_scales);
        if self.input.is_some() {
            cfg.input = self.input;
        }
        if self.coefficients.is_some() {
            cfg.coefficients = self.coefficients;
        }
        if self.expect_gap.is_some() {
            cfg.expect_gap = self.expect_gap;
        }
        if self.out.is_some() {
            cfg.out_dir = self.out;
        }
        Ok(cfg)
    }
}

/// Entry point of the `alphamol` binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = cli.into_config().and_then(|cfg| run(&cfg));
    match result {
        Ok(outcome) => {
            println!(
                "{} {}: {}",
                outcome.manifest.command.name(),
                if outcome.manifest.pass { "pass" } else { "FAIL" },
                outcome.dir.join("manifest.json").display()
            );
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Collects artifacts under the output directory.
struct Artifacts {
    dir: PathBuf,
    names: Vec<String>,
}

impl Artifacts {
    fn path(&mut self, name: &str) -> PathBuf {
        self.names.push(name.to_string());
        self.dir.join(name)
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        let path = self.path(name);
        write_atomic(&path, &bytes)
    }

    fn csv(&mut self, name: &str, write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
        let mut bytes = Vec::new();
        write(&mut bytes)?;
        let path = self.path(name);
        write_atomic(&path, &bytes)
    }

    fn image(&mut self, name: &str, img: &Image) -> Result<()> {
        let path = self.dir.join(name);
        for p in write_image(&path, img)? {
            let rel = p.strip_prefix(&self.dir).unwrap_or(&p).to_string_lossy().into_owned();
            self.names.push(rel);
        }
        Ok(())
    }
}

/// Run one command and write its artifacts, `manifest.json` and
/// `timing.txt` into the output directory.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    let start = Instant::now();
    let dir = cfg.output_dir();
    fs::create_dir_all(&dir)?;
    let mut art = Artifacts { dir: dir.clone(), names: Vec::new() };
    art.json("config.json", &RunConfig { out_dir: None, ..cfg.clone() })?;
    let (summary, pass) = match cfg.command {
        Command::BuildFrame => cmd_build_frame(cfg, &mut art)?,
        Command::Transform => cmd_transform(cfg, &mut art)?,
        Command::Gramian => cmd_gramian(cfg, &mut art)?,
        Command::Consistency => cmd_consistency(cfg, &mut art)?,
        Command::Cartoon => cmd_cartoon(cfg, &mut art)?,
        Command::Nterm => cmd_nterm(cfg, &mut art)?,
        Command::MoleculeCheck => cmd_molecule_check(cfg, &mut art)?,
    };
    write_atomic(&dir.join("timing.txt"), format!("wall_seconds {:.3}\n", start.elapsed().as_secs_f64()).as_bytes())?;
    art.names.push("timing.txt".into());
    let manifest = RunManifest {
        command: cfg.command,
        config_sha256: cfg.hash(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        artifacts: art.names.clone(),
        summary,
        pass,
    };
    art.json("manifest.json", &manifest)?;
    Ok(RunOutcome { dir, manifest })
}

fn resolve(spec: FrameSpec, grid: FrequencyGrid) -> FrameSpec {
    if spec.scales() == 0 {
        spec.with_scales(max_admissible_scales(&spec, grid))
    } else {
        spec
    }
}

fn build(spec: FrameSpec, grid: FrequencyGrid) -> Result<Frame> {
    resolve(spec, grid).build(grid)
}

#[derive(Serialize)]
struct ScaleSummary {
    j: i32,
    classes: usize,
    /// `floor(j (1 - alpha))`, curvelets only.
    angular_level: Option<u32>,
    coefficients: usize,
    /// Largest `|xi_1|`, `|xi_2|` over the supports at this scale.
    support_box: [i64; 2],
    max_lattice: [usize; 2],
}

fn cmd_build_frame(cfg: &RunConfig, art: &mut Artifacts) -> Result<(Value, bool)> {
    let grid = cfg.grid()?;
    let frame = build(cfg.frame, grid)?;
    let mut scales: Vec<ScaleSummary> = Vec::new();
    for band in frame.bands() {
        let idx = match scales.iter().position(|s| s.j == band.j) {
            Some(i) => i,
            None => {
                let angular_level = match frame.spec() {
                    FrameSpec::Curvelet { alpha, .. } => Some(angular_level(band.j, *alpha)),
                    _ => None,
                };
                scales.push(ScaleSummary {
                    j: band.j,
                    classes: 0,
                    angular_level,
                    coefficients: 0,
                    support_box: [0, 0],
                    max_lattice: [0, 0],
                });
                scales.len() - 1
            }
        };
        let s = &mut scales[idx];
        s.classes += 1;
        s.coefficients += band.len();
        for xi in &band.freqs {
            s.support_box[0] = s.support_box[0].max(xi[0].abs());
            s.support_box[1] = s.support_box[1].max(xi[1].abs());
        }
        s.max_lattice[0] = s.max_lattice[0].max(band.lattice[0]);
        s.max_lattice[1] = s.max_lattice[1].max(band.lattice[1]);
    }
    scales.sort_by_key(|s| s.j);
    let summary = json!({
        "frame": frame.spec(),
        "n": grid.n(),
        "coefficients": frame.len(),
        "covered_radius": frame.spec().covered_radius(),
        "scales": scales,
    });
    art.json("frame.json", &summary)?;
    Ok((json!({ "frame": frame.spec(), "coefficients": frame.len() }), true))
}

fn cmd_transform(cfg: &RunConfig, art: &mut Artifacts) -> Result<(Value, bool)> {
    let grid = cfg.grid()?;
    let frame = build(cfg.frame, grid)?;
    let load = || -> Result<Image> {
        let path = cfg.input.as_ref().ok_or_else(|| invalid("transform needs an input image"))?;
        let img = read_image(path)?;
        if img.n() != grid.n() {
            return Err(Error::GridMismatch { expected: grid.n(), found: img.n() });
        }
        Ok(img)
    };
    match cfg.direction {
        Direction::Analyze => {
            let c = frame.analyze(&load()?)?;
            art.csv("coefficients.csv", |w| c.write_csv(&frame, w))?;
            Ok((json!({ "coefficients": c.len(), "energy": c.energy() }), true))
        }
        Direction::Synthesize => {
            let path = cfg.coefficients.as_ref().ok_or_else(|| invalid("synthesize needs a coefficient CSV"))?;
            let c = CoefficientSet::read_csv(&frame, BufReader::new(fs::File::open(path)?))?;
            let img = frame.reconstruct(&c)?;
            art.image("reconstruction.f64", &img)?;
            Ok((json!({ "norm2": img.norm2() }), true))
        }
        Direction::RoundTrip => {
            let f = load()?;
            let c = frame.analyze(&f)?;
            let back = frame.reconstruct(&c)?;
            let norm2 = f.norm2();
            let rel = if norm2 == 0.0 { back.norm2().sqrt() } else { (f.sub(&back).norm2() / norm2).sqrt() };
            art.csv("coefficients.csv", |w| c.write_csv(&frame, w))?;
            art.image("reconstruction.f64", &back)?;
            let energy_ratio = if norm2 == 0.0 { 1.0 } else { c.energy() / norm2 };
            Ok((
                json!({ "relative_error": rel, "energy_ratio": energy_ratio, "tolerance": 1e-2 }),
                rel <= 1e-2,
            ))
        }
    }
}

fn cmd_gramian(cfg: &RunConfig, art: &mut Artifacts) -> Result<(Value, bool)> {
    if cfg.pairs == 0 {
        return Err(Error::Empty("gramian sampler"));
    }
    let grid = cfg.grid()?;
    let a = build(cfg.frame, grid)?;
    let b = build(cfg.frame_b, grid)?;
    let policy = SamplerPolicy {
        count: cfg.pairs,
        seed: cfg.seeds.first().copied().unwrap_or(0),
        min_scale: cfg.min_scale,
        ..Default::default()
    };
    let samples = sample_gramian(&a, &b, &policy)?;
    let report = verify_decay(&samples, cfg.target_order, &DecayConfig::default())?;
    art.csv("samples.csv", |w| write_samples_csv(&samples, w))?;
    art.json("decay.json", &report)?;
    Ok((
        json!({
            "slope": report.slope,
            "tail_slope": report.tail_slope,
            "omega_decades": report.omega_decades,
            "constant_lower_half": report.constant_lower_half,
            "constant_upper_half": report.constant_upper_half,
        }),
        report.pass,
    ))
}

fn cmd_consistency(cfg: &RunConfig, art: &mut Artifacts) -> Result<(Value, bool)> {
    let a = cfg.frame.parametrization()?;
    let b = cfg.frame_b.parametrization()?;
    let ladder = LadderConfig { start_scale: cfg.start_scale, rungs: cfg.rungs, ..Default::default() };
    let reports = saturation_ladder(&a, &b, cfg.frame.alpha(), &cfg.ks, &ladder)?;
    let mut pass = true;
    let mut verdicts = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        art.csv(&format!("ladder_{i}.csv"), |w| write_ladder_csv(r, w))?;
        let expected = if r.k > 2.0 { Verdict::Consistent } else { Verdict::DivergentSuspect };
        pass &= r.verdict == expected;
        verdicts.push(json!({
            "k": r.k,
            "verdict": r.verdict,
            "expected": expected,
            "final_increment": r.final_increment,
            "per_scale_slope": r.per_scale_slope,
        }));
    }
    art.json("reports.json", &reports)?;
    Ok((json!({ "ladders": verdicts }), pass))
}

fn cmd_cartoon(cfg: &RunConfig, art: &mut Artifacts) -> Result<(Value, bool)> {
    let grid = cfg.grid()?;
    if cfg.seeds.is_empty() {
        return Err(Error::Empty("seed list"));
    }
    // band-limited copies reconstruct exactly in `frame`
    let radius = resolve(cfg.frame, grid).covered_radius();
    let mut images = Vec::new();
    for &seed in &cfg.seeds {
        let spec = CartoonSpec::random(cfg.beta, seed)?;
        let img = generate_cartoon(&spec, grid)?;
        art.json(&format!("cartoon_{seed}.spec.json"), &spec)?;
        art.image(&format!("cartoon_{seed}.f64"), &img)?;
        art.image(&format!("cartoon_{seed}_bandlimited.f64"), &smooth_bandlimit(&img, radius)?)?;
        images.push(json!({
            "seed": seed,
            "norm2": img.norm2(),
            "boundary_regularity": boundary_regularity_estimate(&spec),
        }));
    }
    Ok((json!({ "images": images }), true))
}

fn cmd_nterm(cfg: &RunConfig, art: &mut Artifacts) -> Result<(Value, bool)> {
    if cfg.frames.is_empty() {
        return Err(invalid("nterm needs at least one frame"));
    }
    if cfg.seeds.is_empty() {
        return Err(Error::Empty("seed list"));
    }
    let grid = cfg.grid()?;
    let frames = cfg.frames.iter().map(|s| build(*s, grid)).collect::<Result<Vec<_>>>()?;
    let radius = frames.iter().map(|f| f.spec().covered_radius()).fold(f64::INFINITY, f64::min);
    let ladder = dyadic_ladder(cfg.ladder_lo, cfg.ladder_hi);
    let bound = if frames.len() >= 2 { Some(frame_lp_crossnorm_bound(&frames[0], &frames[1], cfg.p, None)?) } else { None };

    let mut exponents = vec![Vec::new(); frames.len()];
    let mut transfers = Vec::new();
    let mut pass = true;
    for &seed in &cfg.seeds {
        let cartoon = generate_cartoon(&CartoonSpec::random(cfg.beta, seed)?, grid)?;
        let f = smooth_bandlimit(&cartoon, radius)?;
        for (i, frame) in frames.iter().enumerate() {
            let curve = error_curve(frame, &f, &ladder)?;
            art.csv(&format!("curve_{i}_{}_seed{seed}.csv", frame.spec().family()), |w| {
                write_curve_csv(&curve, w)
            })?;
            exponents[i].push(curve.exponent);
        }
        if let Some(bound) = bound {
            let cert = transfer_certificate(&frames[0].analyze(&f)?, &frames[1].analyze(&f)?, bound, cfg.p)?;
            pass &= cert.holds;
            transfers.push(json!({ "seed": seed, "certificate": cert }));
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let means: Vec<f64> = exponents.iter().map(|e| mean(e)).collect();
    if let Some(gap) = cfg.expect_gap {
        pass &= means[0] <= means[means.len() - 1] - gap;
    }
    let per_frame: Vec<Value> = frames
        .iter()
        .zip(&exponents)
        .zip(&means)
        .map(|((fr, e), m)| json!({ "frame": fr.spec(), "exponents": e, "mean_exponent": m }))
        .collect();
    let summary = json!({
        "radius": radius,
        "ladder": ladder,
        "frames": per_frame,
        "gramian_bound": bound,
        "transfer": transfers,
    });
    art.json("rates.json", &summary)?;
    Ok((json!({ "mean_exponents": means, "gramian_bound": bound }), pass))
}

/// One class per scale `0..=max_j`: the first class with `l = 0` in the
/// first cone.
pub fn representative_classes(spec: &FrameSpec, max_j: i32) -> Result<Vec<(i32, i32, i64)>> {
    let par = spec.parametrization()?;
    let classes = par.classes(max_j);
    let mut out = Vec::new();
    for j in 0..=max_j {
        let at_j: Vec<_> = classes.iter().filter(|c| c.j == j).collect();
        let pick = at_j.iter().find(|c| c.l == 0).or(at_j.first()).ok_or(Error::Empty("classes at a scale"))?;
        out.push((pick.eps, pick.j, pick.l));
    }
    Ok(out)
}

fn cmd_molecule_check(cfg: &RunConfig, art: &mut Artifacts) -> Result<(Value, bool)> {
    let spec = cfg.frame.with_scales(cfg.frame.scales().max(cfg.molecule_scales.max(0) as u32));
    let classes = representative_classes(&spec, cfg.molecule_scales)?;
    let cert = check_generator(&spec, &classes, PROXY_ORDER, cfg.derivative_levels, &CheckConfig::default())?;
    art.json("certificate.json", &cert)?;
    let per_scale: Vec<f64> = cert.per_scale.iter().map(|s| s.constant).collect();
    Ok((json!({ "ratio": cert.ratio, "threshold": cert.threshold, "per_scale": per_scale }), cert.pass))
}
