use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spheredesign::cubature::DEFAULT_TOL;
use spheredesign::design::save_native;
use spheredesign::stereogram::Palette;
use spheredesign::symmetry::{
    detect_point_group_with, label_orbits, CandidateAction, PointGroupOptions,
};
use spheredesign::*;

/// Designs on the sphere and ball: verification, construction, search,
/// symmetry and stereograms.
#[derive(Parser)]
#[command(name = "spheredesign", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a point file as a spherical t-design.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Sloane)]
        format: Format,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Draw a stereogram as SVG.
    Render(RenderArgs),
    /// Write a subset design c0 S0 + c1 S1 + c2 S2 + c3 S3.
    Subset {
        #[arg(long)]
        coeffs: String,
        /// Read the coefficients as total set masses instead of per-point
        /// multiplicities.
        #[arg(long)]
        set_masses: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exchange search for 18-run designs on the 27 ball candidates.
    Optimize {
        #[arg(long, value_enum)]
        criterion: Criterion,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long)]
        restarts: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Group the designs in a directory into isomorphism classes.
    Classify {
        #[arg(long = "in-dir")]
        in_dir: PathBuf,
        /// Use only the 24 rotations rather than all 48 symmetries.
        #[arg(long)]
        rotations_only: bool,
    },
    /// Detect the point group of a point file.
    Pointgroup {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Sloane)]
        format: Format,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Project a unit vector onto the stereogram plane.
    Project {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long = "in", group = "source")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Sloane)]
    format: Format,
    #[arg(long, group = "source")]
    subset: Option<String>,
    #[arg(long, value_enum, group = "source")]
    named: Option<Named>,
    #[arg(long)]
    out: PathBuf,
    /// Draw meridians and parallels.
    #[arg(long)]
    net: bool,
    #[arg(long, default_value_t = 30.0)]
    net_step: f64,
    /// Scale mark areas by point weight.
    #[arg(long)]
    weight_areas: bool,
    /// Colour marks by orbit.
    #[arg(long)]
    color_orbits: bool,
    /// Comma-separated directions such as 111,-110.
    #[arg(long, allow_hyphen_values = true)]
    directions: Option<String>,
    #[arg(long, default_value_t = 600)]
    size: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Sloane,
    Graef,
    Native,
}

impl From<Format> for PointFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Sloane => PointFormat::SloanePlain,
            Format::Graef => PointFormat::GraefWeighted,
            Format::Native => PointFormat::Native,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Named {
    Ccd,
    Bbd,
    Rotatable,
    Eoptimal,
}

impl From<Named> for NamedDesign {
    fn from(n: Named) -> Self {
        match n {
            Named::Ccd => NamedDesign::CentralComposite,
            Named::Bbd => NamedDesign::BoxBehnken,
            Named::Rotatable => NamedDesign::Rotatable,
            Named::Eoptimal => NamedDesign::EOptimal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Criterion {
    Ds,
    Dps,
}

impl From<Criterion> for CriterionKind {
    fn from(c: Criterion) -> Self {
        match c {
            Criterion::Ds => CriterionKind::Ds,
            Criterion::Dps => CriterionKind::Dps,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var("SPHEREDESIGN_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| format!("SPHEREDESIGN_THREADS={v:?} is not a number"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Check {
            input,
            format,
            t,
            tol,
        } => {
            let d = load_point_file(&input, format.into())?;
            println!("{}", check_t_design(&d, t, tol)?);
        }
        Command::Render(args) => render(args)?,
        Command::Subset {
            coeffs,
            set_masses,
            out,
        } => {
            let c: SubsetCoefficients = coeffs.parse()?;
            let c = if set_masses {
                let g = |s| c.get(s);
                use spheredesign::subset::SubsetSet::*;
                SubsetCoefficients::set_masses(g(S0), g(S1), g(S2), g(S3))?
            } else {
                c
            };
            save_native(&build_subset_design(&c)?, &out)?;
        }
        Command::Optimize {
            criterion,
            alpha,
            restarts,
            seed,
            out,
        } => optimize(criterion.into(), alpha, restarts, seed, &out)?,
        Command::Classify {
            in_dir,
            rotations_only,
        } => classify(&in_dir, rotations_only)?,
        Command::Pointgroup { input, format, tol } => {
            let d = load_point_file(&input, format.into())?;
            let masses: Vec<f64> = d.masses().collect();
            let opts = PointGroupOptions {
                tol,
                ..PointGroupOptions::default()
            };
            let g = detect_point_group_with(d.points(), Some(&masses), opts)?;
            println!("{} order={}", g.label, g.order());
        }
        Command::Project { point } => {
            let v = parse_triple(&point)?;
            let s = project(&UnitPoint3::new(v[0], v[1], v[2])?);
            println!("{:.6} {:.6} {}", s.u, s.v, s.hemisphere.code());
        }
    }
    Ok(())
}

fn parse_triple(s: &str) -> Result<[f64; 3]> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidDesign(format!("cannot parse point {s:?}")))?;
    <[f64; 3]>::try_from(vals)
        .map_err(|_| Error::InvalidDesign(format!("expected three coordinates in {s:?}")))
}

fn render(args: RenderArgs) -> Result<()> {
    let mut palette = Palette::Orbit;
    let design = if let Some(path) = &args.input {
        let d = load_point_file(path, args.format.into())?;
        if args.color_orbits && !matches!(args.format, Format::Native) {
            let masses: Vec<f64> = d.masses().collect();
            let g =
                detect_point_group_with(d.points(), Some(&masses), PointGroupOptions::default())?;
            let labels = label_orbits(d.points(), &g.ops, 1e-6);
            // orbit labels start at 1; shift so the innermost orbit is black
            d.with_orbit_labels(labels.iter().map(|l| l - 1).collect())?
        } else {
            d
        }
    } else if let Some(c) = &args.subset {
        palette = Palette::SubsetSets;
        build_subset_design(&c.parse()?)?
    } else if let Some(n) = args.named {
        palette = Palette::SubsetSets;
        build_subset_design(&NamedDesign::from(n).coefficients())?
    } else {
        return Err(Error::InvalidDesign(
            "one of --in, --subset or --named is required".into(),
        ));
    };
    let directions = match &args.directions {
        Some(s) => s
            .split(',')
            .map(|t| t.trim().parse::<Direction>())
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let opts = RenderOptions {
        size_px: args.size,
        polar_net: args.net,
        net_step_deg: args.net_step,
        weight_areas: args.weight_areas,
        color_by_orbit: args.color_orbits,
        directions,
        palette,
        ..RenderOptions::default()
    };
    let scene = build_scene(&design, &opts)?;
    fs::write(&args.out, render_svg(&scene, &opts))?;
    Ok(())
}

fn optimize(kind: CriterionKind, alpha: f64, restarts: usize, seed: u64, out: &Path) -> Result<()> {
    let problem = DesignProblem::ball27().with_alpha(alpha)?;
    let outcome = exchange_search(&problem, kind, restarts, seed);
    fs::create_dir_all(out)?;
    let mut log = String::new();
    for rec in &outcome.log {
        log.push_str(&rec.log_line());
        log.push('\n');
    }
    fs::write(out.join("run.log"), log)?;
    let best = outcome.best(1e-9);
    for (k, (d, _)) in best.iter().enumerate() {
        let s = d.to_spherical(problem.candidates())?;
        save_native(&s, out.join(format!("optimum_{k:03}.txt")))?;
    }
    match outcome.best_value() {
        Some(v) => println!(
            "best={v:.12e} optima={} distinct={} failed={}",
            best.len(),
            outcome.distinct.len(),
            outcome.failed_restarts()
        ),
        None => println!(
            "best=inf optima=0 distinct=0 failed={}",
            outcome.failed_restarts()
        ),
    }
    Ok(())
}

fn classify(dir: &Path, rotations_only: bool) -> Result<()> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    paths.sort();
    let cands = CandidateSet::ball27();
    let designs = paths
        .iter()
        .map(|p| ExactDesign::from_spherical(&load_point_file(p, PointFormat::Native)?, &cands))
        .collect::<Result<Vec<_>>>()?;
    let action = if rotations_only {
        CandidateAction::rotations_ball27()
    } else {
        CandidateAction::octahedral_ball27()
    };
    for (k, class) in action.classes(&designs).iter().enumerate() {
        println!("{}", class.report_line(k));
    }
    Ok(())
}
