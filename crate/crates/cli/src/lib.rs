//! Command-line surface of `lazytwist`. [`run`] dispatches one invocation and
//! returns its exit code: 0 on success, 1 when `paper-suite` finds a mismatch,
//! 2 on input errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use lazytwist::hopf::{self, GTensor};
use lazytwist::lazy::{self, H2Report, Status};
use lazytwist::{fixtures, Error, FiniteGroup, GroupMap};
use serde_json::{json, Value};

/// Limit used by `paper-suite` so that order-81 fixtures are in reach.
pub const SUITE_MAX_ORDER: usize = 128;

#[derive(Parser, Debug)]
#[command(name = "lazytwist", about = "Invariant Drinfeld twists and H2_l(G) of finite groups")]
struct Cli {
    /// Largest group order for exponential searches.
    #[arg(long, global = true, default_value_t = 64)]
    max_order: usize,
    /// Directory searched for tensor and group files given by bare name.
    #[arg(long, global = true)]
    fixture_dir: Option<PathBuf>,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, classes, centre and abelian normal subgroups.
    GroupInfo { group: String },
    /// Class-preserving automorphisms modulo inner ones.
    Autc { group: String },
    /// The set B(G) of pairs (A, b).
    Bg { group: String },
    /// The verdict on H2_l(G).
    H2 { group: String },
    /// Check that a tensor is an invariant normalized twist.
    TwistVerify { group: String, tensor: String },
    /// The pair (A, b) attached to an invariant twist.
    TwistTheta { group: String, tensor: String },
    /// Exactness of the linearized twist complex.
    Liecheck { group: String },
    /// Every worked example, with a pass/fail summary.
    #[command(name = "paper-suite")]
    WorkedExamples,
}

struct Ctx {
    max_order: usize,
    fixture_dir: Option<PathBuf>,
    pretty: bool,
}

impl Ctx {
    fn locate(&self, arg: &str) -> Option<PathBuf> {
        let direct = PathBuf::from(arg);
        if direct.is_file() {
            return Some(direct);
        }
        let dirs = self
            .fixture_dir
            .iter()
            .cloned()
            .chain(std::iter::once(PathBuf::from("fixtures")));
        for dir in dirs {
            for candidate in [dir.join(arg), dir.join(format!("{arg}.json"))] {
                if candidate.is_file() {
                    return Some(candidate);
                }
            }
        }
        None
    }

    fn group(&self, arg: &str) -> Result<Arc<FiniteGroup>, Error> {
        match fixtures::by_name(arg) {
            Err(Error::UnknownFixture(_)) => {}
            other => return other.map(Arc::new),
        }
        let path = self
            .locate(arg)
            .ok_or_else(|| Error::UnknownFixture(arg.to_string()))?;
        let v = read_json(&path)?;
        let g = fixtures::resolve_group(&v)?;
        Ok(Arc::new(if v.get("name").is_none() {
            g.with_name(arg)
        } else {
            g
        }))
    }

    fn tensor(&self, g: &Arc<FiniteGroup>, arg: &str) -> Result<GTensor, Error> {
        let v = match self.locate(arg) {
            Some(path) => read_json(&path)?,
            None => {
                let t = fixtures::tensor_by_name(arg)?;
                if t.group().name() != g.name() {
                    return Err(Error::Parse(format!(
                        "tensor {arg} lives on {}, not {}",
                        t.group().name(),
                        g.name()
                    )));
                }
                t.to_json()
            }
        };
        match v.get("group") {
            Some(Value::String(name)) if name != g.name() => {
                return Err(Error::Parse(format!(
                    "tensor is over {name}, not {}",
                    g.name()
                )))
            }
            Some(inline @ Value::Object(_)) => {
                let h = fixtures::resolve_group(inline)?;
                if h.table_rows() != g.table_rows() {
                    return Err(Error::Parse("inline tensor group differs from the given group".into()));
                }
            }
            _ => {}
        }
        let t = GTensor::from_json(g, &v)?;
        if t.degree() != 2 {
            return Err(Error::Parse("a twist has degree 2".into()));
        }
        Ok(t)
    }

    fn emit(&self, out: &mut dyn Write, v: &Value) {
        let s = if self.pretty {
            serde_json::to_string_pretty(v)
        } else {
            serde_json::to_string(v)
        }
        .expect("values serialize");
        let _ = writeln!(out, "{s}");
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Run with process standard output and error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Run with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    let ctx = Ctx {
        max_order: cli.max_order,
        fixture_dir: cli.fixture_dir,
        pretty: cli.pretty,
    };
    match dispatch(&ctx, cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(ctx: &Ctx, command: Command, out: &mut dyn Write) -> Result<i32, Error> {
    let value = match command {
        Command::GroupInfo { group } => group_info(&*ctx.group(&group)?),
        Command::Autc { group } => autc(&*ctx.group(&group)?, ctx.max_order)?,
        Command::Bg { group } => {
            let g = ctx.group(&group)?;
            let bg = lazy::bg_enumerate(&g, ctx.max_order)?;
            json!({
                "group": g.name(),
                "bg_size": bg.len(),
                "elements": bg.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            })
        }
        Command::H2 { group } => lazy::h2_compute(&ctx.group(&group)?, ctx.max_order)?.to_json(),
        Command::TwistVerify { group, tensor } => {
            let g = ctx.group(&group)?;
            let f = ctx.tensor(&g, &tensor)?;
            json!({
                "twist": hopf::is_twist(&f),
                "invariant": hopf::is_invariant(&f),
                "normalized": hopf::is_normalized(&f),
            })
        }
        Command::TwistTheta { group, tensor } => {
            let g = ctx.group(&group)?;
            let f = ctx.tensor(&g, &tensor)?;
            if !hopf::is_twist(&f) {
                return Err(Error::NotATwist);
            }
            if let Some(s) = hopf::invariance_failure(&f) {
                return Err(Error::NotInvariant(s));
            }
            let th = hopf::theta(&f)?;
            json!({"socle": th.socle.elements(), "form": th.form.to_json(&th.dual)})
        }
        Command::Liecheck { group } => {
            lazy::lie_complex_check(&*ctx.group(&group)?, ctx.max_order)?.to_json()
        }
        Command::WorkedExamples => {
            let (v, pass) = worked_examples(ctx.max_order.max(SUITE_MAX_ORDER))?;
            ctx.emit(out, &v);
            return Ok(if pass { 0 } else { 1 });
        }
    };
    ctx.emit(out, &value);
    Ok(0)
}

fn group_info(g: &FiniteGroup) -> Value {
    let mut v = json!({
        "name": g.name(),
        "order": g.order(),
        "exponent": g.exponent(),
        "abelian": g.is_abelian(),
        "generators": g.generators(),
        "class_sizes": g.conjugacy_classes().iter().map(Vec::len).collect::<Vec<_>>(),
        "center": g.center().elements(),
        "normal_abelian_subgroups": g
            .normal_abelian_subgroups()
            .iter()
            .map(|s| s.elements().to_vec())
            .collect::<Vec<_>>(),
    });
    if let Some(labels) = g.labels() {
        v["labels"] = json!(labels);
    }
    v
}

fn autc(g: &FiniteGroup, max_order: usize) -> Result<Value, Error> {
    let (auts, index) = g.class_preserving_auts(max_order)?;
    let inner: Vec<GroupMap> = (0..g.order()).map(|x| g.inner(x)).collect();
    let mut covered = std::collections::HashSet::new();
    let mut outer = Vec::new();
    for phi in &auts {
        if covered.contains(&phi.images) {
            continue;
        }
        for i in &inner {
            covered.insert(phi.compose(i).images);
        }
        outer.push(
            g.generators()
                .iter()
                .map(|&s| phi.apply(s))
                .collect::<Vec<_>>(),
        );
    }
    Ok(json!({
        "group": g.name(),
        "generators": g.generators(),
        "aut_c_order": auts.len(),
        "inn_order": g.order() / g.center().order(),
        "int_mod_inn": index,
        "coset_generator_images": outer,
    }))
}

/// What a worked example must show.
struct Expectation {
    group: &'static str,
    exact_order: Option<usize>,
    status: Status,
    bounds: Option<(usize, usize)>,
    bg_size: Option<usize>,
    int_mod_inn: Option<usize>,
    structure: Option<Vec<usize>>,
}

fn exact(group: &'static str, order: usize) -> Expectation {
    Expectation {
        group,
        exact_order: Some(order),
        status: Status::Exact,
        bounds: None,
        bg_size: None,
        int_mod_inn: None,
        structure: None,
    }
}

fn expectations() -> Vec<Expectation> {
    let mut out = vec![
        exact("A4", 2),
        Expectation {
            bg_size: Some(3),
            ..exact("D8", 1)
        },
        exact("Q8", 1),
        exact("S3", 1),
        exact("S4", 1),
        Expectation {
            structure: Some(vec![3]),
            ..exact("Wr_3", 3)
        },
        Expectation {
            bg_size: Some(9),
            structure: Some(vec![3, 3]),
            ..exact("C27sd", 9)
        },
        Expectation {
            group: "Wall32",
            exact_order: None,
            status: Status::Undetermined,
            bounds: Some((2, 4)),
            bg_size: Some(2),
            int_mod_inn: Some(2),
            structure: None,
        },
    ];
    for name in ["C2", "C3", "C4", "C5", "C6", "C7", "C8"] {
        out.push(exact(name, 1));
    }
    out.push(exact("V4", 2));
    out
}

fn check(e: &Expectation, r: &H2Report) -> Vec<String> {
    let mut failures = Vec::new();
    if r.exact_order != e.exact_order {
        failures.push(format!("exact_order {:?}, expected {:?}", r.exact_order, e.exact_order));
    }
    if r.status != e.status {
        failures.push(format!("status {}, expected {}", r.status.as_str(), e.status.as_str()));
    }
    if let Some((lo, hi)) = e.bounds {
        if (r.order_lower, r.order_upper) != (lo, hi) {
            failures.push(format!(
                "bounds [{}, {}], expected [{lo}, {hi}]",
                r.order_lower, r.order_upper
            ));
        }
    }
    if let Some(n) = e.bg_size {
        if r.bg.len() != n {
            failures.push(format!("bg_size {}, expected {n}", r.bg.len()));
        }
    }
    if let Some(n) = e.int_mod_inn {
        if r.int_mod_inn != n {
            failures.push(format!("int_mod_inn {}, expected {n}", r.int_mod_inn));
        }
    }
    if let Some(s) = &e.structure {
        if r.structure.as_ref() != Some(s) {
            failures.push(format!("structure {:?}, expected {s:?}", r.structure));
        }
    }
    failures
}

/// Reports and a pass/fail summary for every worked example.
pub fn worked_examples(max_order: usize) -> Result<(Value, bool), Error> {
    let mut reports = Vec::new();
    let mut summary = Vec::new();
    let mut all = true;
    for e in expectations() {
        let g = Arc::new(fixtures::by_name(e.group)?);
        let r = lazy::h2_compute(&g, max_order)?;
        let failures = check(&e, &r);
        all &= failures.is_empty();
        summary.push(json!({
            "group": e.group,
            "pass": failures.is_empty(),
            "mismatches": failures,
        }));
        reports.push(r.to_json());
    }
    Ok((json!({"reports": reports, "summary": summary, "all_pass": all}), all))
}
