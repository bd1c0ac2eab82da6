use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use cyclord::affine::{torus_boxes, torus_geometry, torus_grid_agreement, torus_point};
use cyclord::instances::{default_suites, lookup, run_suite, Instance, Suite, ALL_SUITES, BUILTIN};
use cyclord::render::{render_image, GridSpec, Slice};
use cyclord::topology::{interval_catalog, separating_intervals};
use cyclord::witness::{replay, Point, Query, Space};
use cyclord::{AxiomReport, ChartPoint, JElem, SampleSpec};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::artifacts::{slug, write, write_report, WitnessFile};
use crate::{config, input, Command, Sampling};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn and(self, o: Outcome) -> Outcome {
        if self == Outcome::Pass {
            o
        } else {
            Outcome::Fail
        }
    }

    fn from_ok(ok: bool) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Probe {
    /// ε-independence of intervals over a dual extension.
    TangentFiber,
    /// The three descriptions of ]−e,e[ in Sym(n,Q).
    SpectralBall,
    /// Search a catalog of intervals for a pair separating two points.
    Separation,
}

impl From<&Sampling> for SampleSpec {
    fn from(s: &Sampling) -> SampleSpec {
        SampleSpec::new(s.seed, s.cases)
    }
}

pub fn dispatch(cmd: Command, out: &Path) -> Result<Outcome> {
    match cmd {
        Command::CheckAxioms {
            instance,
            suite,
            sampling,
        } => {
            let suites = suite
                .iter()
                .map(|s| s.parse::<Suite>())
                .collect::<Result<Vec<_>, _>>()?;
            check_axioms(&Named::plain(&instance), &suites, &(&sampling).into(), out)
        }
        Command::QueryCyclic {
            instance,
            triple,
            word,
        } => {
            let triple: [Value; 3] = input::points(&triple, 3)?.try_into().expect("three points");
            let word = word.as_deref().map(input::json).transpose()?;
            answer(&instance, &Query::Cyclic { triple, word })
        }
        Command::QueryTransversal { instance, pair } => {
            let pair: [Value; 2] = input::points(&pair, 2)?.try_into().expect("two points");
            answer(&instance, &Query::Transversal { pair })
        }
        Command::Replay { witness } => replay_witness(&witness),
        Command::IntervalImage {
            instance,
            a,
            b,
            grid,
            coords,
            base,
            svg,
            csv,
        } => {
            let base = base.as_deref().map(input::json).transpose()?;
            let job = ImageJob {
                instance,
                label: None,
                a: input::point(&a)?,
                b: input::point(&b)?,
                grid,
                coords,
                base,
                svg,
                csv,
            };
            interval_image(&job, out)
        }
        Command::TorusBoxes {
            n,
            a,
            b,
            grid,
            svg,
            csv,
        } => {
            let job = TorusJob {
                n,
                a: input::rationals(&a)?,
                b: input::rationals(&b)?,
                grid,
                svg,
                csv,
            };
            torus(&job, out)
        }
        Command::TopologyProbe {
            instance,
            probe,
            pair,
            endpoints,
            sampling,
        } => {
            let pair = pair.as_deref().map(|p| input::points(p, 2)).transpose()?;
            let endpoints = endpoints.as_deref().map(input::json).transpose()?;
            topology_probe(
                &Named::plain(&instance),
                probe,
                pair,
                endpoints,
                &(&sampling).into(),
                out,
            )
        }
        Command::TubeExperiment { instance, sampling } => single_suite(
            &Named::plain(&instance),
            Suite::Tube,
            &(&sampling).into(),
            out,
        ),
        Command::ListInstances => {
            list_instances();
            Ok(Outcome::Pass)
        }
        Command::Run { config } => config::run(&config, out),
    }
}

/// An instance as named by the user; `text` is what the lookup resolves,
/// `label` names the output directory.
#[derive(Debug, Clone)]
pub struct Named {
    pub label: String,
    pub text: String,
}

impl Named {
    pub fn plain(name: &str) -> Named {
        Named {
            label: name.to_string(),
            text: name.to_string(),
        }
    }

    fn resolve(&self) -> Result<Instance> {
        instance(&self.text)
    }

    fn dir(&self, out: &Path) -> PathBuf {
        out.join(slug(&self.label))
    }
}

fn instance(name: &str) -> Result<Instance> {
    lookup(name).with_context(|| format!("instance {name:?}"))
}

/// Prints and files a report; witnesses carry replay queries.
fn emit(
    name: &Named,
    inst: &Instance,
    suite: Suite,
    spec: &SampleSpec,
    r: &AxiomReport,
    out: &Path,
) -> Result<Outcome> {
    print!("{r}");
    let witnesses = write_report(&name.dir(out), &name.text, suite, spec, r, |check, w| {
        replay(inst, suite, check, w)
            .map(|x| x.answers)
            .unwrap_or_default()
    })?;
    for w in &witnesses {
        println!("witness: {}", w.display());
    }
    Ok(Outcome::from_ok(r.ok()))
}

pub fn check_axioms(
    name: &Named,
    suites: &[Suite],
    spec: &SampleSpec,
    out: &Path,
) -> Result<Outcome> {
    let inst = name.resolve()?;
    let suites = if suites.is_empty() {
        default_suites(&inst)
    } else {
        suites.to_vec()
    };
    let mut outcome = Outcome::Pass;
    for suite in suites {
        let r = run_suite(&inst, suite, spec)
            .with_context(|| format!("suite {suite} on {}", name.label))?;
        outcome = outcome.and(emit(name, &inst, suite, spec, &r, out)?);
    }
    println!("reports: {}", name.dir(out).display());
    Ok(outcome)
}

pub fn single_suite(name: &Named, suite: Suite, spec: &SampleSpec, out: &Path) -> Result<Outcome> {
    let inst = name.resolve()?;
    let r = run_suite(&inst, suite, spec)?;
    emit(name, &inst, suite, spec, &r, out)
}

fn answer(name: &str, q: &Query) -> Result<Outcome> {
    let space = Space::for_instance(&instance(name)?)?;
    println!("{}", q.eval(&space)?);
    Ok(Outcome::Pass)
}

/// Exit status 1 when the recorded failure reproduces.
fn replay_witness(path: &Path) -> Result<Outcome> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let wf: WitnessFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let inst = instance(&wf.instance)?;
    let r = replay(&inst, wf.suite, &wf.check, &wf.witness())?;
    for (step, got) in wf.queries.iter().zip(&r.answers) {
        println!("{} -> {got} (recorded {})", step.command, step.expect);
    }
    println!(
        "{}/{} on {}: {}",
        wf.suite,
        wf.check,
        wf.instance,
        if r.reproduced {
            "failure reproduced"
        } else {
            "failure not reproduced"
        }
    );
    Ok(Outcome::from_ok(!r.reproduced))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageJob {
    pub instance: String,
    /// Output directory name; the instance name when absent.
    #[serde(skip)]
    pub label: Option<String>,
    pub a: Value,
    pub b: Value,
    #[serde(default = "default_grid")]
    pub grid: String,
    #[serde(default)]
    pub coords: Vec<usize>,
    #[serde(default)]
    pub base: Option<Value>,
    #[serde(default)]
    pub svg: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

fn default_grid() -> String {
    "-4:4:64;-4:4:64".into()
}

fn chart_point(space: &Space, v: &Value) -> Result<ChartPoint> {
    match space.parse_point(v)? {
        Point::Chart(p) => Ok(p),
        Point::Full(_) => bail!("interval images need a chart instance; use torus-boxes for tori"),
    }
}

pub fn interval_image(job: &ImageJob, out: &Path) -> Result<Outcome> {
    let inst = instance(&job.instance)?;
    let space = Space::for_instance(&inst)?;
    let (a, b) = (chart_point(&space, &job.a)?, chart_point(&space, &job.b)?);
    let desc = space.descriptor();
    let mut grid = GridSpec::parse(&job.grid)?;
    grid.axes.truncate(desc.dim());
    let coords = if job.coords.is_empty() {
        (0..grid.axes.len()).collect()
    } else {
        job.coords.clone()
    };
    if let Some(&k) = coords.iter().find(|&&k| k >= desc.dim()) {
        bail!(
            "coordinate {k} out of range for {desc} of dimension {}",
            desc.dim()
        );
    }
    let base = match &job.base {
        Some(v) => JElem::from_coords_json(desc, v)?,
        None => desc.zero(),
    };
    let (svg, csv) = match (&job.svg, &job.csv) {
        (None, None) => {
            let dir = out.join(slug(job.label.as_ref().unwrap_or(&job.instance)));
            std::fs::create_dir_all(&dir)?;
            (
                Some(dir.join("interval-image.svg")),
                Some(dir.join("interval-image.csv")),
            )
        }
        (s, c) => (s.clone(), c.clone()),
    };
    for p in svg.iter().chain(&csv) {
        if let Some(d) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(d)?;
        }
    }
    let r = render_image(
        &a,
        &b,
        &grid,
        &Slice::new(coords, base),
        &[],
        svg.as_deref(),
        csv.as_deref(),
    )?;
    println!("class: {}", r.class);
    println!("members: {} of {} cells", r.members(), r.cells.len());
    for p in svg.iter().chain(&csv) {
        println!("wrote {}", p.display());
    }
    Ok(Outcome::Pass)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusJob {
    pub n: usize,
    #[serde(with = "rational_list")]
    pub a: Vec<cyclord::Rational>,
    #[serde(with = "rational_list")]
    pub b: Vec<cyclord::Rational>,
    #[serde(default = "default_torus_grid")]
    pub grid: String,
    #[serde(default)]
    pub svg: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

fn default_torus_grid() -> String {
    "-1:1:40;-1:1:40".into()
}

mod rational_list {
    use cyclord::rational::{format_rational, parse_rational};
    use cyclord::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

pub fn torus(job: &TorusJob, out: &Path) -> Result<Outcome> {
    if job.a.len() != job.n || job.b.len() != job.n {
        bail!("--a and --b need {} coordinates", job.n);
    }
    let boxes = torus_boxes(&job.a, &job.b)?;
    println!("boxes: {}", boxes.len());
    for bx in &boxes {
        println!("{}", bx.to_json());
    }
    let agreement = torus_grid_agreement(&job.a, &job.b)?;
    println!(
        "grid agreement: {} of {} grid points inside, {} mismatches",
        agreement.members, agreement.points, agreement.mismatches
    );
    let dir = out.join(format!("torus{}", job.n));
    let summary = json!({
        "n": job.n,
        "a": job.a.iter().map(cyclord::rational::format_rational).collect::<Vec<_>>(),
        "b": job.b.iter().map(cyclord::rational::format_rational).collect::<Vec<_>>(),
        "boxes": boxes.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
        "grid_points": agreement.points,
        "grid_members": agreement.members,
        "mismatches": agreement.mismatches,
        "first_mismatch": agreement.first_mismatch,
    });
    write(
        &dir.join("boxes.json"),
        &(serde_json::to_string_pretty(&summary)? + "\n"),
    )?;
    if job.svg.is_some() || job.csv.is_some() {
        let grid = GridSpec::parse(&job.grid)?;
        if grid.axes.len() != job.n {
            bail!("torus{} figures need a {}-axis grid", job.n, job.n);
        }
        let g = torus_geometry(job.n)?;
        let pa = ChartPoint::Finite(torus_point(&g, &job.a)?);
        let pb = ChartPoint::Finite(torus_point(&g, &job.b)?);
        let slice = Slice::new((0..job.n).collect(), g.algebra.zero()).cube();
        for p in job.svg.iter().chain(&job.csv) {
            if let Some(d) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(d)?;
            }
        }
        render_image(
            &pa,
            &pb,
            &grid,
            &slice,
            &boxes,
            job.svg.as_deref(),
            job.csv.as_deref(),
        )?;
        for p in job.svg.iter().chain(&job.csv) {
            println!("wrote {}", p.display());
        }
    }
    Ok(Outcome::from_ok(agreement.mismatches == 0))
}

pub fn topology_probe(
    name: &Named,
    probe: Probe,
    pair: Option<Vec<Value>>,
    endpoints: Option<Value>,
    spec: &SampleSpec,
    out: &Path,
) -> Result<Outcome> {
    match probe {
        Probe::TangentFiber => single_suite(name, Suite::TangentFiber, spec, out),
        Probe::SpectralBall => single_suite(name, Suite::SpectralBall, spec, out),
        Probe::Separation => {
            let pair = pair.ok_or_else(|| anyhow!("separation needs --pair"))?;
            let endpoints = endpoints.ok_or_else(|| anyhow!("separation needs --endpoints"))?;
            let space = Space::for_instance(&name.resolve()?)?;
            let (p, q) = (
                chart_point(&space, &pair[0])?,
                chart_point(&space, &pair[1])?,
            );
            let ends = endpoints
                .as_array()
                .ok_or_else(|| anyhow!("--endpoints must be a JSON array"))?
                .iter()
                .map(|v| chart_point(&space, v))
                .collect::<Result<Vec<_>>>()?;
            let catalog = interval_catalog(&ends)?;
            let desc = space.descriptor().clone();
            let samples: Vec<ChartPoint> = (0..spec.cases)
                .map(|i| ChartPoint::Finite(desc.sample(&mut spec.sampler(i))))
                .collect();
            let found = separating_intervals(&p, &q, &catalog, &samples)?;
            println!(
                "catalog: {} intervals, {} sample points",
                catalog.len(),
                samples.len()
            );
            println!("separating pairs: {}", found.len());
            let listed: Vec<Value> = found
                .iter()
                .map(|s| {
                    json!({
                        "around_p": [s.around_p.a.to_json(), s.around_p.b.to_json()],
                        "around_q": [s.around_q.a.to_json(), s.around_q.b.to_json()],
                    })
                })
                .collect();
            for l in listed.iter().take(5) {
                println!("{l}");
            }
            let report = json!({
                "instance": name.text,
                "p": p.to_json(),
                "q": q.to_json(),
                "catalog": catalog.len(),
                "samples": samples.len(),
                "seed": spec.seed,
                "separating": listed,
            });
            write(
                &name.dir(out).join("separation.json"),
                &(serde_json::to_string_pretty(&report)? + "\n"),
            )?;
            Ok(Outcome::Pass)
        }
    }
}

fn list_instances() {
    println!("built-in instances:");
    for (name, what) in BUILTIN {
        println!("  {name:<12} {what}");
    }
    println!("descriptor text is also accepted, e.g. Sym(2,Q), Product(Scalar(Q),Spin(3,Q)), DualExt(Scalar(Q))");
    println!("suites: {}", ALL_SUITES.map(|s| s.name()).join(", "));
}
