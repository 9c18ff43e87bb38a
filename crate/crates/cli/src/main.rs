//! `patchwork`: build, verify and export signed triangulations.
//!
//! Exit codes: 0 success, 1 a verified quantity disagrees with its
//! prediction, 2 bad usage or a construction that cannot be built.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use patchwork_core::census::{census_for, CensusReport};
use patchwork_core::homology::{betti, components, euler_from_betti};
use patchwork_core::io::{coordinate_slice, datum_to_json, datum_from_json, gamma_to_off, gamma_value, canonical, viro_polynomial};
use patchwork_core::patchwork::{build_gamma, count_all_plus, extend, gamma_cells};
use patchwork_core::signs::{solve_orthants, Datum};
use patchwork_core::triangulation::{
    build_ad4, build_iv3, build_iv4, build_sd3, build_sd4, certify_convexity, construct_lift, default_ad_triples,
    validate, Iv3Params, Iv4Flavor, LiftCertificate, Triangulation,
};

#[derive(Parser)]
#[command(name = "patchwork", version, about = "Combinatorial patchworking with exact verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a signed triangulation and write it as JSON.
    Build {
        #[command(flatten)]
        sel: Selection,
        /// Embed a convex lift certificate.
        #[arg(long)]
        lift: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build, verify and compare every computed invariant with its prediction.
    Verify {
        #[command(flatten)]
        sel: Selection,
        /// Count cells only; skip homology.
        #[arg(long)]
        euler_only: bool,
    },
    /// Export a datum, its hypersurface or its Viro polynomial.
    Export {
        #[command(flatten)]
        sel: Selection,
        /// Read the datum from a JSON document instead of building it.
        #[arg(long)]
        input: Option<PathBuf>,
        /// OFF mesh of the hypersurface.
        #[arg(long)]
        off: Option<PathBuf>,
        /// Viro polynomial text.
        #[arg(long)]
        viro_polynomial: Option<PathBuf>,
        /// Hypersurface JSON document.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Restrict to a coordinate hyperplane first, written `x4=0`.
        #[arg(long)]
        slice: Option<String>,
    },
    /// Orthants where a simplex's extended signs match a target.
    SolveOrthants {
        /// Vertex coordinates, `x,y;x,y;...`.
        #[arg(long)]
        vertices: String,
        /// One sign per vertex, 0 for plus and 1 for minus, comma separated.
        #[arg(long)]
        signs: String,
        /// Target signs, same format.
        #[arg(long)]
        target: String,
    },
    /// Print the predicted invariants as JSON.
    Census {
        #[arg(long)]
        construction: String,
        #[arg(long)]
        degree: i64,
    },
}

#[derive(Args, Clone)]
struct Selection {
    /// iv3, iv4-odd, iv4-even, sd3, sd4 or ad4.
    #[arg(long)]
    construction: Option<String>,
    #[arg(long)]
    degree: Option<i64>,
    /// Half-degree parameter of sd3 (degree 2k+1).
    #[arg(long)]
    k: Option<i64>,
    /// First point of the sd3 base triangle, `x,y,z`.
    #[arg(long)]
    a: Option<String>,
    /// Second point of the sd3 base triangle.
    #[arg(long)]
    b: Option<String>,
}

/// An error that maps to exit code 2.
#[derive(Debug)]
struct Usage(anyhow::Error);

fn usage<T>(r: anyhow::Result<T>) -> Result<T, Usage> {
    r.map_err(Usage)
}

fn ints(s: &str) -> anyhow::Result<Vec<i64>> {
    s.split(',').map(|x| x.trim().parse::<i64>().with_context(|| format!("bad integer {x:?}"))).collect()
}

fn point3(s: &str) -> anyhow::Result<[i64; 3]> {
    let v = ints(s)?;
    v.try_into().map_err(|_| anyhow!("expected three coordinates in {s:?}"))
}

impl Selection {
    fn tag(&self) -> anyhow::Result<&str> {
        self.construction.as_deref().ok_or_else(|| anyhow!("--construction is required"))
    }

    fn degree(&self) -> anyhow::Result<i64> {
        self.degree.ok_or_else(|| anyhow!("--degree is required"))
    }

    /// `(k, a, b)` for sd3, defaulting to the standard points for `k`.
    fn sd3(&self) -> anyhow::Result<(i64, [i64; 3], [i64; 3])> {
        let k = match (self.k, self.degree) {
            (Some(k), _) => k,
            (None, Some(m)) if m % 2 == 1 => (m - 1) / 2,
            _ => bail!("sd3 needs --k or an odd --degree"),
        };
        let a = self.a.as_deref().map(point3).transpose()?.unwrap_or([2 * k - 3, 0, 0]);
        let b = self.b.as_deref().map(point3).transpose()?.unwrap_or([0, 2 * k - 5, 0]);
        Ok((k, a, b))
    }

    fn build(&self) -> anyhow::Result<Triangulation> {
        let t = match self.tag()? {
            "iv3" => build_iv3(&Iv3Params::standard(self.degree()?))?,
            "iv4-odd" => build_iv4(self.degree()?, Iv4Flavor::Odd)?,
            "iv4-even" => build_iv4(self.degree()?, Iv4Flavor::Even)?,
            "sd3" => {
                let (k, a, b) = self.sd3()?;
                build_sd3(k, a, b)?
            }
            "sd4" => build_sd4(self.degree()?)?,
            "ad4" => {
                let m = self.degree()?;
                build_ad4(m, &default_ad_triples(m))?
            }
            other => bail!("unknown construction {other:?}"),
        };
        Ok(t)
    }

    fn census(&self) -> anyhow::Result<CensusReport> {
        let tag = self.tag()?;
        if tag == "sd3" {
            let (k, a, b) = self.sd3()?;
            return Ok(patchwork_core::census::sd3_census(k, a, b)?);
        }
        Ok(census_for(tag, self.degree()?)?)
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_build(sel: &Selection, lift: bool, out: Option<&PathBuf>) -> Result<ExitCode, Usage> {
    let t = usage(sel.build())?;
    let cert = if lift { Some(usage(construct_lift(&t).map_err(Into::into))?) } else { None };
    let d = usage(Datum::standard(t).map_err(Into::into))?;
    usage(write_out(out, &datum_to_json(&d, cert.as_ref())))?;
    Ok(ExitCode::SUCCESS)
}

struct Report {
    rows: Vec<(String, String, String, bool)>,
}

impl Report {
    fn row(&mut self, what: &str, predicted: impl ToString, computed: impl ToString) {
        let (p, c) = (predicted.to_string(), computed.to_string());
        let ok = p == c;
        self.rows.push((what.into(), p, c, ok));
    }

    fn flag(&mut self, what: &str, ok: bool) {
        self.rows.push((what.into(), "true".into(), ok.to_string(), ok));
    }

    fn print(&self) -> bool {
        println!("{:<28} {:>14} {:>14}  result", "quantity", "predicted", "computed");
        for (w, p, c, ok) in &self.rows {
            println!("{w:<28} {p:>14} {c:>14}  {}", if *ok { "pass" } else { "FAIL" });
        }
        let all = self.rows.iter().all(|r| r.3);
        println!("{}", if all { "PASS" } else { "FAIL" });
        all
    }
}

fn cmd_verify(sel: &Selection, euler_only: bool) -> Result<ExitCode, Usage> {
    let t = usage(sel.build())?;
    let census = usage(sel.census())?;
    let mut r = Report { rows: Vec::new() };
    let v = validate(&t);
    r.flag("triangulation", v.is_triangulation());
    let lift = construct_lift(&t).ok();
    r.flag("convex lift", lift.as_ref().is_some_and(|c| certify_convexity(&t, c).0));
    let n = t.ambient_dim;
    let d = usage(Datum::standard(t).map_err(Into::into))?;
    let e = extend(&d);
    let cells = e.census();
    if n == 4 {
        let chi_plus = count_all_plus(&e).1;
        if let Some(p) = census.integer("chi_plus") {
            r.row("chi_plus", p, chi_plus);
        }
        if let Some(p) = census.integer("chi_ry_minus") {
            r.row("chi(RY-)", p, 2 - 2 * chi_plus);
        }
        if let (Some(sigma), Some(p)) = (census.integer("sigma"), census.integer("deviation")) {
            r.row("sigma - chi(RY-)", p, sigma - (2 - 2 * chi_plus));
        }
    } else if let Some(p) = census.integer("euler") {
        r.row("euler (cells)", p, cells.euler_gamma());
    }
    if !euler_only {
        let g = gamma_cells(&e);
        r.flag("hypersurface closed", g.closed);
        let b = betti(&g.chain);
        for (i, &x) in b.iter().enumerate() {
            if let Some(p) = census.integer(&format!("b{i}")) {
                r.row(&format!("b{i}"), p, x);
            }
        }
        if let Some(p) = census.integer("total_betti") {
            r.row("total Betti", p, b.iter().sum::<usize>());
        }
        r.row("euler (Betti)", g.chain.euler(), euler_from_betti(&b));
        let comps = components(&g.chain);
        r.row("components", b[0], comps);
    }
    Ok(if r.print() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn parse_slice(s: &str) -> anyhow::Result<usize> {
    let (axis, value) = s.split_once('=').ok_or_else(|| anyhow!("slice must look like x4=0"))?;
    let i: usize = axis.trim().strip_prefix('x').and_then(|x| x.parse().ok()).ok_or_else(|| anyhow!("bad axis {axis:?}"))?;
    if value.trim() != "0" || i == 0 {
        bail!("only coordinate hyperplanes x_i = 0 with i >= 1 can be sliced");
    }
    Ok(i - 1)
}

struct ExportTargets<'a> {
    off: Option<&'a PathBuf>,
    viro: Option<&'a PathBuf>,
    json: Option<&'a PathBuf>,
    slice: Option<&'a str>,
}

fn cmd_export(sel: &Selection, input: Option<&PathBuf>, out: ExportTargets) -> Result<ExitCode, Usage> {
    let (mut d, mut lift): (Datum, Option<LiftCertificate>) = match input {
        Some(p) => {
            let text = usage(fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))?;
            usage(datum_from_json(&text).map_err(Into::into))?
        }
        None => (usage(sel.build().and_then(|t| Ok(Datum::standard(t)?)))?, None),
    };
    if let Some(s) = out.slice {
        let axis = usage(parse_slice(s))?;
        d = usage(coordinate_slice(&d, axis).map_err(Into::into))?;
        lift = None;
    }
    if let Some(p) = out.viro {
        let l = match lift.take() {
            Some(l) => l,
            None => usage(construct_lift(&d.triangulation).map_err(Into::into))?,
        };
        usage(write_out(Some(p), &usage(viro_polynomial(&d, &l).map_err(Into::into))?))?;
    }
    if out.off.is_some() || out.json.is_some() {
        if out.off.is_some() && d.triangulation.ambient_dim > 3 {
            return Err(Usage(anyhow!("OFF export of a 3-manifold needs --slice")));
        }
        let g = build_gamma(&extend(&d));
        if let Some(p) = out.off {
            usage(write_out(Some(p), &usage(gamma_to_off(&g).map_err(Into::into))?))?;
        }
        if let Some(p) = out.json {
            usage(write_out(Some(p), &canonical(&gamma_value(&g, d.triangulation.degree))))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(vertices: &str, signs: &str, target: &str) -> Result<ExitCode, Usage> {
    let pts: Vec<Vec<i64>> = usage(vertices.split(';').map(ints).collect())?;
    let par: Vec<Vec<u8>> = pts.iter().map(|p| p.iter().map(|x| x.rem_euclid(2) as u8).collect()).collect();
    let to_bits = |s: &str| -> anyhow::Result<Vec<u8>> {
        ints(s)?.into_iter().map(|x| if x == 0 || x == 1 { Ok(x as u8) } else { bail!("signs are 0 or 1") }).collect()
    };
    let (s, t) = (usage(to_bits(signs))?, usage(to_bits(target))?);
    if par.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(Usage(anyhow!("vertices must have equal dimension")));
    }
    let sol = usage(solve_orthants(&par, &s, &t).map_err(Into::into))?;
    let masks: Vec<String> = sol.iter().map(|o| o.to_string()).collect();
    println!("{{{}}}", masks.join(", "));
    Ok(ExitCode::SUCCESS)
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("PATCHWORK_THREADS") {
        let n: usize = v.parse().with_context(|| format!("PATCHWORK_THREADS={v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Usage> {
    usage(configure_threads())?;
    match &cli.command {
        Command::Build { sel, lift, out } => cmd_build(sel, *lift, out.as_ref()),
        Command::Verify { sel, euler_only } => cmd_verify(sel, *euler_only),
        Command::Export { sel, input, off, viro_polynomial, json, slice } => cmd_export(
            sel,
            input.as_ref(),
            ExportTargets { off: off.as_ref(), viro: viro_polynomial.as_ref(), json: json.as_ref(), slice: slice.as_deref() },
        ),
        Command::SolveOrthants { vertices, signs, target } => cmd_solve(vertices, signs, target),
        Command::Census { construction, degree } => {
            let r = usage(census_for(construction, *degree).map_err(Into::into))?;
            println!("{}", canonical(&serde_json::to_value(&r).expect("report serializes")));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
