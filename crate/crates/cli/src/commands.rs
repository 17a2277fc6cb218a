use std::f64::consts::TAU;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use mylar_core::action::{quantized_radius, radicand_u, MotionConstants};
use mylar_core::dynamics::{integrate_trajectory, PhasePoint, TrajectoryControls};
use mylar_core::geometry::mesh;
use mylar_core::ode::IntegratorControls;
use mylar_core::quadrature::QuadratureControls;
use mylar_core::verify::{
    compare_point, format_float, run_sweep, summarize, write_sweep_csv, ComparisonRow, Grid, RowStatus, SweepSpec,
    SweepSummary,
};
use serde::Serialize;

use crate::config::{require_finite, Format, RunConfig};
use crate::CliError;

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| match path {
        Some(p) => CliError::Io(format!("{}: {e}", p.display())),
        None => CliError::Io(e.to_string()),
    }
}

/// Runs `body` against the output file, or standard output when no path is set.
fn with_output<F>(path: Option<&PathBuf>, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let p = path.map(PathBuf::as_path);
    match p {
        Some(path) => {
            let file = File::create(path).map_err(io_err(p))?;
            let mut w = BufWriter::new(file);
            body(&mut w).and_then(|_| w.flush()).map_err(io_err(p))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w).and_then(|_| w.flush()).map_err(io_err(None))
        }
    }
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(io::Error::other)?;
    writeln!(w)
}

#[derive(Serialize)]
struct WithConfig<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn count(name: &str, n: usize) -> Result<usize, CliError> {
    if n == 0 {
        Err(CliError::Validation(format!("{name} must be at least 1")))
    } else {
        Ok(n)
    }
}

pub fn geometry(mut cfg: RunConfig) -> Result<(), CliError> {
    cfg.command = Some("geometry".into());
    let params = cfg.params()?;
    let u_min = require_finite("u_min", *cfg.u_min.get_or_insert(-2.0))?;
    let u_max = require_finite("u_max", *cfg.u_max.get_or_insert(2.0))?;
    let nu = count("nu", *cfg.nu.get_or_insert(41))?;
    let v_min = require_finite("v_min", *cfg.v_min.get_or_insert(0.0))?;
    let v_max = require_finite("v_max", *cfg.v_max.get_or_insert(TAU))?;
    let nv = count("nv", *cfg.nv.get_or_insert(36))?;
    let format = cfg.format_or(Format::Csv);
    let rows = mesh((u_min, u_max), nu, (v_min, v_max), nv, &params)?;
    with_output(cfg.out.as_ref(), |w| match format {
        Format::Csv => {
            writeln!(w, "# {}", cfg.header())?;
            writeln!(w, "u,v,x,y,z,K")?;
            for r in &rows {
                let vals = [r.u, r.v, r.x, r.y, r.z, r.k].map(format_float);
                writeln!(w, "{}", vals.join(","))?;
            }
            Ok(())
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                rows: &'a [mylar_core::geometry::MeshRow],
            }
            write_json(w, &WithConfig { config: &cfg, body: Body { rows: &rows } })
        }
    })
}

pub fn simulate(mut cfg: RunConfig) -> Result<(), CliError> {
    cfg.command = Some("simulate".into());
    let params = cfg.params()?;
    let model = cfg.model()?;
    let l = require_finite("l", *cfg.l.get_or_insert(0.0))?;
    let s = require_finite("s", *cfg.s.get_or_insert(0.0))?;
    let u0 = require_finite("u0", *cfg.u0.get_or_insert(0.0))?;
    let t_end = *cfg.t_end.get_or_insert(10.0);
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(CliError::Validation("t_end must be positive".into()));
    }
    let p_u = match (cfg.pu0, cfg.energy) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation("give either energy or pu0, not both".into()));
        }
        (Some(p), None) => require_finite("pu0", p)?,
        (None, _) => {
            let energy = require_finite("energy", *cfg.energy.get_or_insert(1.0))?;
            let c = MotionConstants::new(energy, l, s);
            let r = radicand_u(u0, &c, &model, &params);
            let scale = 1.0 + l * l + s * s + params.mr2() * (energy.abs() + model.scale() + s * s / params.inertia);
            if r < -1e-12 * scale {
                return Err(CliError::Numeric(format!("u0 = {u0} is classically forbidden at this energy")));
            }
            r.max(0.0).sqrt()
        }
    };
    let integrator = IntegratorControls {
        rtol: *cfg.rtol.get_or_insert(1e-10),
        atol: *cfg.atol.get_or_insert(1e-12),
        ..IntegratorControls::default()
    };
    let controls = TrajectoryControls { integrator, record_every: count("record_every", *cfg.record_every.get_or_insert(1))? };
    let start = PhasePoint { u: u0, v: 0.0, psi: 0.0, p_u, p_v: l, p_psi: s };
    let tr = integrate_trajectory(&start, &model, &params, t_end, &controls)?;
    let format = cfg.format_or(Format::Csv);
    with_output(cfg.out.as_ref(), |w| match format {
        Format::Csv => {
            writeln!(w, "# {}", cfg.header())?;
            writeln!(w, "t,u,v,psi,p_u,p_v,p_psi,H,omega_drift,omega_relative")?;
            for x in &tr.samples {
                let st = x.state;
                let vals = [x.t, st.u, st.v, st.psi, st.p_u, st.p_v, st.p_psi, x.energy, x.omega_drift, x.omega_relative]
                    .map(format_float);
                writeln!(w, "{}", vals.join(","))?;
            }
            Ok(())
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                max_energy_drift: f64,
                max_p_v_drift: f64,
                max_p_psi_drift: f64,
                steps: usize,
                samples: &'a [mylar_core::dynamics::TrajectorySample],
            }
            let body = Body {
                max_energy_drift: tr.max_energy_drift,
                max_p_v_drift: tr.max_p_v_drift,
                max_p_psi_drift: tr.max_p_psi_drift,
                steps: tr.steps,
                samples: &tr.samples,
            };
            write_json(w, &WithConfig { config: &cfg, body })
        }
    })
}

pub fn actions(mut cfg: RunConfig) -> Result<(), CliError> {
    cfg.command = Some("actions".into());
    let params = cfg.params()?;
    let model = cfg.model()?;
    let c = MotionConstants::new(
        require_finite("energy", *cfg.energy.get_or_insert(1.0))?,
        require_finite("l", *cfg.l.get_or_insert(0.0))?,
        require_finite("s", *cfg.s.get_or_insert(0.0))?,
    );
    let seed = cfg.seed.map(|x| require_finite("seed", x)).transpose()?;
    let row = compare_point(&c, &model, &params, seed, &QuadratureControls::default());
    if row.status == RowStatus::InvalidInput {
        return Err(CliError::Validation(row.message.unwrap_or_default()));
    }
    if row.status != RowStatus::Ok {
        return Err(CliError::Numeric(row.message.unwrap_or_else(|| row.status.label().to_string())));
    }
    let format = cfg.format_or(Format::Json);
    with_output(cfg.out.as_ref(), |w| match format {
        Format::Json => write_json(w, &WithConfig { config: &cfg, body: &row }),
        Format::Csv => write_sweep_csv(std::slice::from_ref(&row), Some(&cfg.header()), w),
    })
}

fn grid(
    name: &str,
    min: &mut Option<f64>,
    max: &mut Option<f64>,
    count_field: &mut Option<usize>,
    fallback: f64,
) -> Result<Grid, CliError> {
    let lo = require_finite(&format!("{name}_min"), *min.get_or_insert(fallback))?;
    let hi = require_finite(&format!("{name}_max"), *max.get_or_insert(lo))?;
    let n = count(&format!("{name}_count"), *count_field.get_or_insert(1))?;
    Ok(Grid::new(lo, hi, n))
}

pub fn sweep(mut cfg: RunConfig) -> Result<(), CliError> {
    cfg.command = Some("sweep".into());
    let params = cfg.params()?;
    let model = cfg.model()?;
    let e_default = cfg.energy.unwrap_or(1.0);
    let l_default = cfg.l.unwrap_or(0.0);
    let s_default = cfg.s.unwrap_or(0.0);
    let energy = grid("e", &mut cfg.e_min, &mut cfg.e_max, &mut cfg.e_count, e_default)?;
    let l = grid("l", &mut cfg.l_min, &mut cfg.l_max, &mut cfg.l_count, l_default)?;
    let s = grid("s", &mut cfg.s_min, &mut cfg.s_max, &mut cfg.s_count, s_default)?;
    let spec = SweepSpec { model, params, energy, l, s, quadrature: QuadratureControls::default(), seed: cfg.seed };
    let rows = run_sweep(&spec)?;
    let summary = summarize(&spec, &rows);
    let format = cfg.format_or(Format::Csv);
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                summary: &'a SweepSummary,
                rows: &'a [ComparisonRow],
            }
            with_output(cfg.out.as_ref(), |w| {
                write_json(w, &WithConfig { config: &cfg, body: Body { summary: &summary, rows: &rows } })
            })
        }
        Format::Csv => {
            with_output(cfg.out.as_ref(), |w| write_sweep_csv(&rows, Some(&cfg.header()), w))?;
            let summary_path = cfg.summary.clone().or_else(|| {
                cfg.out.as_ref().map(|p| {
                    let mut name = p.clone().into_os_string();
                    name.push(".summary.json");
                    PathBuf::from(name)
                })
            });
            let body = WithConfig { config: &cfg, body: &summary };
            match summary_path {
                Some(path) => with_output(Some(&path), |w| write_json(w, &body)),
                None => {
                    let text = serde_json::to_string(&body).map_err(|e| CliError::Io(e.to_string()))?;
                    eprintln!("{text}");
                    Ok(())
                }
            }
        }
    }
}

pub fn quantize(mut cfg: RunConfig) -> Result<(), CliError> {
    cfg.command = Some("quantize".into());
    let n = cfg.n.ok_or_else(|| CliError::Validation("the quantum number --n is required".into()))?;
    let r = quantized_radius(n)?;
    let check = std::f64::consts::PI * r * r / 2.0;
    let format = cfg.format_or(Format::Json);
    with_output(cfg.out.as_ref(), |w| match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body {
                #[serde(rename = "N")]
                n: u64,
                r: f64,
                check: f64,
            }
            write_json(w, &WithConfig { config: &cfg, body: Body { n, r, check } })
        }
        Format::Csv => {
            writeln!(w, "# {}", cfg.header())?;
            writeln!(w, "N,r,check")?;
            writeln!(w, "{n},{},{}", format_float(r), format_float(check))
        }
    })
}
