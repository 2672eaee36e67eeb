//! Command-line front end. Every subcommand prints one report, either as a
//! JSON object `{command, inputs, results, tolerances}` or as a TSV table.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::coupling::{
    d_exchange_identity, even_s_table, jw_plane_wave, ls_exclusion_check, partial_wave_project, GridSpec, JwConvention,
    JwSpec, PairOrder, EVEN_S_CUTOFF, EVEN_S_EPS, LS_RELATIVE_CUTOFF,
};
use crate::error::Error;
use crate::geometry::{bisecting_frames_with, parallel_frames_with, Frame, FrameOptions};
use crate::numerics::{ComplexF, HalfInt, TAU};
use crate::states::{canonical_to_helicity, ParticleDesc};
use crate::su2::{compose, from_axis_angle, from_euler_zyz, SU2Element, Vec3};
use crate::twoparticle::{
    exchange_phase, extrapolate_to_zero, multiset_count, pauli_norm, proportionality, symmetrized_pair, Builder,
    OrderedPairDesc,
};
use crate::wigner::{big_d, clebsch_gordan};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "spin-exchange",
    version,
    about = "Spin states with tracked frames, exchange phases and exclusion rules"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dump D^s(g) for a rotation given by zyz Euler angles or axis-angle.
    WignerD(WignerDArgs),
    /// Exact Clebsch-Gordan table for j1 ⊗ j2.
    Cg(CgArgs),
    /// Frame pair, relating rotations and lifts for two directions.
    Frames(FramesArgs),
    /// Measured and predicted exchange phase of an ordered two-particle state.
    ExchangePhase(ExchangeArgs),
    /// Norm of the two-ordering average as the directions merge.
    Pauli(PauliArgs),
    /// Allowed total spins of two identical particles.
    EvenS(EvenSArgs),
    /// Plane-wave and partial-wave reorder factors in the centre-of-mass frame.
    JwCheck(JwArgs),
    /// LS exclusion table for two identical particles.
    LsTable(LsArgs),
    /// Number of ways to put identical entities into states.
    CountStates(CountArgs),
}

#[derive(Args, Debug)]
pub struct WignerDArgs {
    #[arg(long)]
    pub two_s: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Rotation axis; overrides the Euler angles when given with --angle.
    #[arg(long, allow_hyphen_values = true, requires = "angle")]
    pub axis: Option<String>,
    #[arg(long, allow_negative_numbers = true, requires = "axis")]
    pub angle: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CgArgs {
    #[arg(long)]
    pub two_j1: u32,
    #[arg(long)]
    pub two_j2: u32,
    /// Restrict to one total J.
    #[arg(long)]
    pub two_j: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Parallel,
    Bisecting,
}

#[derive(Args, Debug)]
pub struct FrameFlags {
    /// y axis of particle a, needed when the directions are collinear.
    #[arg(long, allow_hyphen_values = true)]
    pub seed: Option<String>,
    /// Use the -π half-turn for r_ab.
    #[arg(long)]
    pub flip: bool,
}

#[derive(Args, Debug)]
pub struct FramesArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub pa: String,
    #[arg(long, allow_hyphen_values = true)]
    pub pb: String,
    #[arg(long, value_enum, default_value_t = KindArg::Parallel)]
    pub kind: KindArg,
    #[command(flatten)]
    pub frame: FrameFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Canonical,
    Helicity,
    Symmetrized,
}

#[derive(Args, Debug)]
pub struct ExchangeArgs {
    #[arg(long, value_enum)]
    pub basis: BasisArg,
    #[arg(long)]
    pub two_s_a: u32,
    #[arg(long)]
    pub two_s_b: u32,
    /// Twice the projection of a; defaults to +s_a.
    #[arg(long, allow_negative_numbers = true)]
    pub two_m_a: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    pub two_m_b: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub pa: String,
    #[arg(long, allow_hyphen_values = true)]
    pub pb: String,
    /// Sign of the half-turn that stands in for the relating rotation.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub r12_sign: i32,
    #[command(flatten)]
    pub frame: FrameFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuilderArg {
    Canonical,
    Helicity,
}

impl From<BuilderArg> for Builder {
    fn from(b: BuilderArg) -> Builder {
        match b {
            BuilderArg::Canonical => Builder::Canonical,
            BuilderArg::Helicity => Builder::Helicity,
        }
    }
}

#[derive(Args, Debug)]
pub struct PauliArgs {
    #[arg(long)]
    pub two_s: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub two_m: Option<i32>,
    #[arg(long, allow_hyphen_values = true, default_value = "0,0,1")]
    pub p: String,
    #[arg(long, value_enum, default_value_t = BuilderArg::Canonical)]
    pub basis: BuilderArg,
    /// Comma-separated separations.
    #[arg(long, default_value = "1e-1,1e-2,1e-3")]
    pub eps: String,
}

#[derive(Args, Debug)]
pub struct EvenSArgs {
    #[arg(long)]
    pub two_s: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Standard,
    YOnly,
}

impl From<ConventionArg> for JwConvention {
    fn from(c: ConventionArg) -> JwConvention {
        match c {
            ConventionArg::Standard => JwConvention::Standard,
            ConventionArg::YOnly => JwConvention::YOnly,
        }
    }
}

#[derive(Args, Debug)]
pub struct GridFlags {
    #[arg(long)]
    pub n_theta: Option<usize>,
    #[arg(long)]
    pub n_phi: Option<usize>,
}

impl GridFlags {
    fn grid(&self, j: HalfInt) -> GridSpec {
        let d = GridSpec::for_j(j);
        GridSpec { n_theta: self.n_theta.unwrap_or(d.n_theta), n_phi: self.n_phi.unwrap_or(d.n_phi) }
    }
}

#[derive(Args, Debug)]
pub struct JwArgs {
    #[arg(long)]
    pub two_s_a: u32,
    #[arg(long)]
    pub two_s_b: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub two_lambda_a: i32,
    #[arg(long, allow_negative_numbers = true)]
    pub two_lambda_b: i32,
    #[arg(long)]
    pub two_j: u32,
    /// Defaults to 0, or 1 for half-integer J.
    #[arg(long, allow_negative_numbers = true)]
    pub two_m: Option<i32>,
    #[arg(long, allow_hyphen_values = true, default_value = "0.48,0.6,0.64")]
    pub p: String,
    #[arg(long, value_enum, default_value_t = ConventionArg::Standard)]
    pub convention: ConventionArg,
    #[command(flatten)]
    pub grid: GridFlags,
}

#[derive(Args, Debug)]
pub struct LsArgs {
    #[arg(long)]
    pub two_s: u32,
    #[arg(long, default_value_t = 3)]
    pub j_max: u32,
    #[arg(long, value_enum, default_value_t = ConventionArg::Standard)]
    pub convention: ConventionArg,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub entities: u64,
    #[arg(long)]
    pub states: u64,
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
        Failure { code: EXIT_USAGE, message: format!("--{flag}: {msg}") }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::NotProportional(_) | Error::OracleDisagreement(_) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// A finished report: the JSON fields plus the TSV table.
pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub results: Value,
    pub tolerances: Map<String, Value>,
    pub table: Vec<Vec<String>>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let v = json!({
                    "command": self.command,
                    "inputs": self.inputs,
                    "results": self.results,
                    "tolerances": self.tolerances,
                });
                let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Tsv => self.table.iter().map(|row| row.join("\t") + "\n").collect(),
        }
    }
}

/// `{:.16e}`: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn num(x: f64) -> Value {
    fmt_f64(x).parse::<serde_json::Number>().map(Value::Number).unwrap_or_else(|_| Value::String(x.to_string()))
}

pub fn cnum(z: ComplexF) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

fn fmt_c(z: ComplexF) -> String {
    format!("{}\t{}", fmt_f64(z.re), fmt_f64(z.im))
}

fn quat(g: SU2Element) -> Value {
    Value::Array(g.to_array().iter().map(|&x| num(x)).collect())
}

fn vec3(v: Vec3) -> Value {
    Value::Array(v.to_array().iter().map(|&x| num(x)).collect())
}

fn frame_json(f: &Frame) -> Value {
    json!({ "x": vec3(f.x), "y": vec3(f.y), "z": vec3(f.z) })
}

fn row(items: impl IntoIterator<Item = impl ToString>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

/// Parses `x,y,z` and normalizes it.
pub fn parse_direction(flag: &str, s: &str) -> CliResult<Vec3> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Failure::usage(flag, format!("expected three comma-separated numbers, got {s:?}")));
    }
    let mut c = [0.0; 3];
    for (slot, p) in c.iter_mut().zip(&parts) {
        *slot = p.parse::<f64>().map_err(|e| Failure::usage(flag, format!("{p:?}: {e}")))?;
    }
    let v = Vec3::new(c[0], c[1], c[2]);
    if !c.iter().all(|x| x.is_finite()) {
        return Err(Failure::usage(flag, "components must be finite"));
    }
    v.normalized().ok_or_else(|| Failure::usage(flag, "zero vector"))
}

fn parse_list(flag: &str, s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|p| {
            let x = p.trim().parse::<f64>().map_err(|e| Failure::usage(flag, format!("{p:?}: {e}")))?;
            if x > 0.0 && x.is_finite() {
                Ok(x)
            } else {
                Err(Failure::usage(flag, format!("{x} is not a positive separation")))
            }
        })
        .collect()
}

fn two_s(flag: &str, v: u32) -> CliResult<HalfInt> {
    i32::try_from(v).map(HalfInt::from_twice).map_err(|_| Failure::usage(flag, "too large"))
}

fn frame_options(f: &FrameFlags) -> CliResult<FrameOptions> {
    let seed = f.seed.as_deref().map(|s| parse_direction("seed", s)).transpose()?;
    Ok(FrameOptions { seed, flip: f.flip })
}

fn inputs(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn tol(pairs: &[(&str, f64)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), num(*v))).collect()
}

fn wigner_d(a: &WignerDArgs) -> CliResult<Report> {
    let s = two_s("two-s", a.two_s)?;
    let g = match (&a.axis, a.angle) {
        (Some(axis), Some(angle)) => from_axis_angle(parse_direction("axis", axis)?, angle)?,
        _ => from_euler_zyz(a.alpha, a.beta, a.gamma),
    };
    let d = big_d(s, g);
    let ms: Vec<HalfInt> = s.projections().collect();
    let mut table = vec![row(["m_row", "m_col", "re", "im"])];
    for (i, mr) in ms.iter().enumerate() {
        for (k, mc) in ms.iter().enumerate() {
            table.push(vec![mr.to_string(), mc.to_string(), fmt_c(d.at(i, k))]);
        }
    }
    let matrix: Vec<Value> = d.rows().into_iter().map(|r| Value::Array(r.into_iter().map(cnum).collect())).collect();
    Ok(Report {
        command: "wigner-d",
        inputs: inputs(&[("two_s", json!(a.two_s)), ("rotation", quat(g))]),
        results: json!({
            "m": ms.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "matrix": matrix,
        }),
        tolerances: Map::new(),
        table,
    })
}

fn cg(a: &CgArgs) -> CliResult<Report> {
    let (j1, j2) = (two_s("two-j1", a.two_j1)?, two_s("two-j2", a.two_j2)?);
    let lo = (a.two_j1 as i32 - a.two_j2 as i32).unsigned_abs();
    let totals: Vec<u32> = match a.two_j {
        Some(t) => {
            if t < lo || t > a.two_j1 + a.two_j2 || (t + a.two_j1 + a.two_j2) % 2 == 1 {
                return Err(Error::TriangleViolation(format!("{j1}, {j2}, {}", HalfInt::from_twice(t as i32))).into());
            }
            vec![t]
        }
        None => (lo..=a.two_j1 + a.two_j2).step_by(2).collect(),
    };
    let mut entries = Vec::new();
    let mut table = vec![row(["j1", "j2", "J", "m1", "m2", "M", "sign", "radicand", "value"])];
    for t in totals {
        let j = HalfInt::from_twice(t as i32);
        for m1 in j1.projections() {
            for m2 in j2.projections() {
                let m = m1 + m2;
                if m.abs().twice() > j.twice() {
                    continue;
                }
                let c = clebsch_gordan(j1, j2, j, m1, m2, m);
                if c.value.is_zero() {
                    continue;
                }
                let rad = c.value.radicand().to_string();
                let value = c.to_f64();
                table.push(row([
                    j1.to_string(),
                    j2.to_string(),
                    j.to_string(),
                    m1.to_string(),
                    m2.to_string(),
                    m.to_string(),
                    c.value.sign().to_string(),
                    rad.clone(),
                    fmt_f64(value),
                ]));
                entries.push(json!({
                    "J": j.to_string(), "m1": m1.to_string(), "m2": m2.to_string(), "M": m.to_string(),
                    "sign": c.value.sign(), "radicand": rad, "value": num(value),
                }));
            }
        }
    }
    Ok(Report {
        command: "cg",
        inputs: inputs(&[("two_j1", json!(a.two_j1)), ("two_j2", json!(a.two_j2)), ("two_j", json!(a.two_j))]),
        results: Value::Array(entries),
        tolerances: Map::new(),
        table,
    })
}

fn frames(a: &FramesArgs) -> CliResult<Report> {
    let (pa, pb) = (parse_direction("pa", &a.pa)?, parse_direction("pb", &a.pb)?);
    let opts = frame_options(&a.frame)?;
    let pair = match a.kind {
        KindArg::Parallel => parallel_frames_with(pa, pb, opts)?,
        KindArg::Bisecting => bisecting_frames_with(pa, pb, opts)?,
    };
    let square = compose(pair.r_ab, pair.r_ab);
    let deck = square.distance(&SU2Element::DECK);
    let mut table = vec![row(["quantity", "w", "x", "y", "z"])];
    for (name, g) in [("r_ab", pair.r_ab), ("r_ba", pair.r_ba), ("lift_a", pair.lift_a), ("lift_b", pair.lift_b)] {
        let q = g.to_array();
        table.push(row([name.to_string(), fmt_f64(q[0]), fmt_f64(q[1]), fmt_f64(q[2]), fmt_f64(q[3])]));
    }
    Ok(Report {
        command: "frames",
        inputs: inputs(&[
            ("pa", vec3(pa)),
            ("pb", vec3(pb)),
            ("kind", json!(format!("{:?}", a.kind).to_lowercase())),
            ("seed", opts.seed.map(vec3).unwrap_or(Value::Null)),
            ("flip", json!(opts.flip)),
        ]),
        results: json!({
            "frame_a": frame_json(&pair.frame_a),
            "frame_b": frame_json(&pair.frame_b),
            "k": vec3(pair.k),
            "r_ab": quat(pair.r_ab),
            "r_ba": quat(pair.r_ba),
            "lift_a": quat(pair.lift_a),
            "lift_b": quat(pair.lift_b),
            "r_ab_squared_minus_deck": num(deck),
            "r_ab_differs_from_r_ba": !pair.r_ab.approx_eq(&pair.r_ba, TAU),
        }),
        tolerances: tol(&[("tau", TAU)]),
        table,
    })
}

fn exchange(a: &ExchangeArgs) -> CliResult<Report> {
    let (sa, sb) = (two_s("two-s-a", a.two_s_a)?, two_s("two-s-b", a.two_s_b)?);
    let ma = a.two_m_a.map(HalfInt::from_twice).unwrap_or(sa);
    let mb = a.two_m_b.map(HalfInt::from_twice).unwrap_or(sb);
    let (pa, pb) = (parse_direction("pa", &a.pa)?, parse_direction("pb", &a.pb)?);
    if a.r12_sign != 1 && a.r12_sign != -1 {
        return Err(Failure::usage("r12-sign", "must be 1 or -1"));
    }
    let da = ParticleDesc::new("a", pa, 1.0, sa, ma)?;
    let db = ParticleDesc::new("b", pb, 1.0, sb, mb)?;
    let (phase, expected) = match a.basis {
        BasisArg::Symmetrized => {
            let v = symmetrized_pair(&da, &db)?;
            let w = symmetrized_pair(&db, &da)?;
            (proportionality(v.amps(), w.amps())?, 1)
        }
        BasisArg::Canonical | BasisArg::Helicity => {
            let builder = if a.basis == BasisArg::Canonical { Builder::Canonical } else { Builder::Helicity };
            let o = OrderedPairDesc::new_with(&da, &db, a.r12_sign, frame_options(&a.frame)?)?;
            (exchange_phase(builder, &o)?, o.expected_phase(builder))
        }
    };
    let expected_c = ComplexF::new(f64::from(expected), 0.0);
    let residual = (phase - expected_c).norm();
    let mut table = vec![row(["quantity", "re", "im"])];
    table.push(vec!["phase".into(), fmt_c(phase)]);
    table.push(vec!["expected".into(), fmt_c(expected_c)]);
    Ok(Report {
        command: "exchange-phase",
        inputs: inputs(&[
            ("basis", json!(format!("{:?}", a.basis).to_lowercase())),
            ("two_s_a", json!(a.two_s_a)),
            ("two_s_b", json!(a.two_s_b)),
            ("two_m_a", json!(ma.twice())),
            ("two_m_b", json!(mb.twice())),
            ("pa", vec3(pa)),
            ("pb", vec3(pb)),
            ("r12_sign", json!(a.r12_sign)),
        ]),
        results: json!({ "phase": cnum(phase), "expected": cnum(expected_c), "residual": num(residual) }),
        tolerances: tol(&[("tau", TAU)]),
        table,
    })
}

fn pauli(a: &PauliArgs) -> CliResult<Report> {
    let s = two_s("two-s", a.two_s)?;
    let m = a.two_m.map(HalfInt::from_twice).unwrap_or(s);
    let p = parse_direction("p", &a.p)?;
    let eps = parse_list("eps", &a.eps)?;
    let norms = pauli_norm(a.basis.into(), "q", p, s, m, &eps)?;
    let limit = extrapolate_to_zero(&eps, &norms);
    let mut table = vec![row(["eps", "norm"])];
    for (e, n) in eps.iter().zip(&norms) {
        table.push(row([fmt_f64(*e), fmt_f64(*n)]));
    }
    table.push(row(["0".to_string(), fmt_f64(limit)]));
    Ok(Report {
        command: "pauli",
        inputs: inputs(&[
            ("two_s", json!(a.two_s)),
            ("two_m", json!(m.twice())),
            ("p", vec3(p)),
            ("basis", json!(format!("{:?}", a.basis).to_lowercase())),
            ("eps", Value::Array(eps.iter().map(|&e| num(e)).collect())),
        ]),
        results: json!({
            "norms": norms.iter().map(|&n| num(n)).collect::<Vec<_>>(),
            "extrapolated": num(limit),
        }),
        tolerances: tol(&[("vanishing", 1e-6)]),
        table,
    })
}

fn even_s(a: &EvenSArgs) -> CliResult<Report> {
    let s = two_s("two-s", a.two_s)?;
    let rows = even_s_table(s)?;
    let mut results = Map::new();
    let mut table = vec![row(["S", "status", "norm"])];
    for r in &rows {
        let status = if r.allowed { "allowed" } else { "forbidden" };
        results.insert(r.s_total.to_string(), json!(status));
        table.push(row([r.s_total.to_string(), status.to_string(), fmt_f64(r.norm)]));
    }
    Ok(Report {
        command: "even-s",
        inputs: inputs(&[("two_s", json!(a.two_s))]),
        results: Value::Object(results),
        tolerances: tol(&[("eps", EVEN_S_EPS), ("forbidden_below", EVEN_S_CUTOFF)]),
        table,
    })
}

fn jw(a: &JwArgs) -> CliResult<Report> {
    let (sa, sb) = (two_s("two-s-a", a.two_s_a)?, two_s("two-s-b", a.two_s_b)?);
    let (la, lb) = (HalfInt::from_twice(a.two_lambda_a), HalfInt::from_twice(a.two_lambda_b));
    let j = two_s("two-j", a.two_j)?;
    let m = HalfInt::from_twice(a.two_m.unwrap_or(j.twice() % 2));
    let p = parse_direction("p", &a.p)?;
    let conv: JwConvention = a.convention.into();
    let spec = JwSpec::new("a", sa, la, "b", sb, lb)?.with_convention(conv);

    let fwd = jw_plane_wave(&spec, p, PairOrder::AFirst)?;
    let rev = jw_plane_wave(&spec, p, PairOrder::BFirst)?;
    let plane = proportionality(fwd.amps(), rev.amps())?;
    let plane_expected = conv.ket_phase(sa, la) / conv.ket_phase(sb, lb);

    let (lhs, rhs) = d_exchange_identity(j, m, la, lb, canonical_to_helicity(p), conv)?;

    let grid = a.grid.grid(j);
    let pw_a = partial_wave_project(&spec, j, m, PairOrder::AFirst, grid)?;
    let pw_b = partial_wave_project(&spec, j, m, PairOrder::BFirst, grid)?;
    let flat = |s: &crate::coupling::PartialWaveState| s.values().iter().flatten().copied().collect::<Vec<_>>();
    let pw = proportionality(&flat(&pw_a), &flat(&pw_b))?;
    let pw_expected = spec.exchange_factor(j);

    let mut table = vec![row(["quantity", "re", "im", "expected_re", "expected_im"])];
    table.push(vec!["plane_wave_factor".into(), fmt_c(plane), fmt_c(plane_expected)]);
    table.push(vec!["d_identity".into(), fmt_c(lhs), fmt_c(rhs)]);
    table.push(vec!["partial_wave_factor".into(), fmt_c(pw), fmt_c(pw_expected)]);
    Ok(Report {
        command: "jw-check",
        inputs: inputs(&[
            ("two_s_a", json!(a.two_s_a)),
            ("two_s_b", json!(a.two_s_b)),
            ("two_lambda_a", json!(a.two_lambda_a)),
            ("two_lambda_b", json!(a.two_lambda_b)),
            ("two_j", json!(a.two_j)),
            ("two_m", json!(m.twice())),
            ("p", vec3(p)),
            ("convention", json!(format!("{:?}", conv))),
            ("n_theta", json!(grid.n_theta)),
            ("n_phi", json!(grid.n_phi)),
        ]),
        results: json!({
            "plane_wave_factor": cnum(plane),
            "plane_wave_expected": cnum(plane_expected),
            "d_identity_lhs": cnum(lhs),
            "d_identity_rhs": cnum(rhs),
            "partial_wave_factor": cnum(pw),
            "partial_wave_expected": cnum(pw_expected),
            "partial_wave_norm": num(pw_a.norm()),
        }),
        tolerances: tol(&[("tau", TAU)]),
        table,
    })
}

fn ls_table(a: &LsArgs) -> CliResult<Report> {
    let s = two_s("two-s", a.two_s)?;
    let rows = ls_exclusion_check(s, a.j_max, a.convention.into())?;
    let mut table = vec![row(["J", "L", "S", "swap_sign", "norm_sq", "status"])];
    let mut out = Vec::new();
    for r in &rows {
        let status = if r.allowed { "allowed" } else { "forbidden" };
        table.push(row([
            r.j.to_string(),
            r.l.to_string(),
            r.s_total.to_string(),
            r.swap_sign.to_string(),
            fmt_f64(r.norm_sq),
            status.to_string(),
        ]));
        out.push(json!({
            "J": r.j.to_string(), "L": r.l.to_string(), "S": r.s_total.to_string(),
            "swap_sign": r.swap_sign, "norm_sq": num(r.norm_sq), "status": status,
        }));
    }
    Ok(Report {
        command: "ls-table",
        inputs: inputs(&[
            ("two_s", json!(a.two_s)),
            ("j_max", json!(a.j_max)),
            ("convention", json!(format!("{:?}", JwConvention::from(a.convention)))),
        ]),
        results: Value::Array(out),
        tolerances: tol(&[("relative_forbidden_below", LS_RELATIVE_CUTOFF)]),
        table,
    })
}

fn count(a: &CountArgs) -> CliResult<Report> {
    let n = multiset_count(a.entities, a.states);
    Ok(Report {
        command: "count-states",
        inputs: inputs(&[("entities", json!(a.entities)), ("states", json!(a.states))]),
        results: n.to_string().parse::<serde_json::Number>().map(Value::Number).expect("integer"),
        tolerances: Map::new(),
        table: vec![row(["count"]), row([n])],
    })
}

pub fn execute(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::WignerD(a) => wigner_d(a),
        Command::Cg(a) => cg(a),
        Command::Frames(a) => frames(a),
        Command::ExchangePhase(a) => exchange(a),
        Command::Pauli(a) => pauli(a),
        Command::EvenS(a) => even_s(a),
        Command::JwCheck(a) => jw(a),
        Command::LsTable(a) => ls_table(a),
        Command::CountStates(a) => count(a),
    }
}

/// Parses `argv`, runs the subcommand, writes the report to `out` (and to
/// `--out` if given) and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let text = report.render(cli.format);
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            let _ = writeln!(err, "error: --out {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    if out.write_all(text.as_bytes()).is_err() {
        return EXIT_USAGE;
    }
    EXIT_OK
}
