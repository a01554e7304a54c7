//! The `gentle-tilt` command line.
//!
//! Every command produces a [`Report`]: a JSON value for `--json`, a text
//! rendering otherwise, and an exit code. Exit codes are 0 for success, 1 for
//! a violated property, 2 for unusable input and 3 when a search bound ran out.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use gentle_tilt::corpus::{self, CorpusEntry};
use gentle_tilt::cutting::{appendix_cut_algebra, cut_along_collection, cut_surface, CutError};
use gentle_tilt::emit;
use gentle_tilt::io::{AlgebraJson, SurfaceJson};
use gentle_tilt::modules::{Oracle, ProjDim};
use gentle_tilt::quiver::{quiver_isomorphic, GentleAlgebra, StringWord};
use gentle_tilt::surface::{arc_from_string, ext_dims_geometric, DissectedSurface};
use gentle_tilt::tilting::{Completion, SearchBudget, TiltingEngine, TiltingError};
use gentle_tilt::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gentle-tilt", version, about = "Tilting theory for gentle algebras and dissected surfaces")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Longest string considered by searches and listings.
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    /// Number of projective resolution steps before giving up.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    /// Read the input from a corpus entry instead of a file.
    #[arg(long, global = true)]
    pub corpus: Option<String>,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Name of a module (list of strings) in the corpus entry.
    #[arg(long, global = true)]
    pub module: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that an algebra or surface file is well formed.
    Validate { file: Option<PathBuf> },
    /// Print the gentle algebra of a dissected surface.
    Algebra { file: Option<PathBuf> },
    /// List the strings up to --max-len.
    Strings { file: Option<PathBuf> },
    /// Dimensions of Ext^i(M(x), M(y)) in every degree.
    Ext {
        x: String,
        y: String,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Projective dimension of a string module.
    Pd {
        x: String,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Check that a list of strings is a pre-tilting module.
    Pretilting(ModuleArgs),
    /// Check that a list of strings is a tilting module.
    Tilting(ModuleArgs),
    /// Complete a pre-tilting module to a tilting module.
    Complete(ModuleArgs),
    /// List the complements of an almost-tilting module.
    Complements(ModuleArgs),
    /// Cut a surface along an arc given by its string or corpus name.
    Cut {
        #[arg(long)]
        arc: String,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Build the cut algebra directly from the string of the cut.
    CutAlgebra {
        #[arg(long)]
        arc: String,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Recompute a corpus entry and compare with its expected values.
    Reproduce { id: String },
    /// Graphviz rendering of the quiver (or the dissection with --dissection).
    EmitDot(EmitArgs),
    /// TikZ rendering of the quiver (or the dissection with --dissection).
    EmitTikz(EmitArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModuleArgs {
    /// Summands as strings, e.g. "a b^-1" or "1_2".
    pub strings: Vec<String>,
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EmitArgs {
    pub file: Option<PathBuf>,
    /// Draw the dual graph of the dissection instead of the quiver.
    #[arg(long)]
    pub dissection: bool,
    /// Draw the result of cutting along this arc.
    #[arg(long)]
    pub arc: Option<String>,
}

/// Outcome of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub code: i32,
    pub json: Value,
    pub text: String,
}

impl Report {
    fn ok(json: Value, text: impl Into<String>) -> Self {
        Report { code: EXIT_OK, json, text: text.into() }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut v = self.json.clone();
            if let Value::Object(m) = &mut v {
                m.insert("exit_code".into(), json!(self.code));
            }
            serde_json::to_string_pretty(&v).expect("serialisable") + "\n"
        } else if self.text.ends_with('\n') {
            self.text.clone()
        } else {
            format!("{}\n", self.text)
        }
    }
}

/// A failure that ends a command early.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(m: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_INPUT, message: m.to_string() }
    }

    fn violation(m: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_VIOLATION, message: m.to_string() }
    }

    pub fn report(&self) -> Report {
        let kind = match self.code {
            EXIT_VIOLATION => "violation",
            EXIT_BUDGET => "budget",
            _ => "input",
        };
        Report { code: self.code, json: json!({ "error": kind, "message": self.message }), text: format!("error: {}", self.message) }
    }
}

fn tilting_failure(e: TiltingError) -> Failure {
    match e {
        TiltingError::BudgetExceeded { .. } => Failure { code: EXIT_BUDGET, message: e.to_string() },
        TiltingError::NotPretilting(_) | TiltingError::Disagreement(_) => Failure::violation(e),
        _ => Failure::input(e),
    }
}

fn cut_failure(e: CutError) -> Failure {
    match e {
        CutError::Internal(_) => Failure::violation(e),
        CutError::Tilting(t) => tilting_failure(t),
        _ => Failure::input(e),
    }
}

/// What a command reads: an algebra, possibly with its surface, and the
/// corpus entry it came from.
struct Input {
    algebra: GentleAlgebra,
    surface: Option<DissectedSurface>,
    entry: Option<CorpusEntry>,
}

impl Input {
    fn load(file: Option<&PathBuf>, opts: &Opts) -> Result<Input, Failure> {
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            return Input::from_text(&text).map_err(|e| Failure::input(format!("{}: {}", path.display(), e.message)));
        }
        let id = opts
            .corpus
            .as_deref()
            .ok_or_else(|| Failure::input("give an input file or --corpus ID"))?;
        Input::from_entry(corpus::load(id).map_err(Failure::input)?)
    }

    fn from_entry(entry: CorpusEntry) -> Result<Input, Failure> {
        let surface = match &entry.surface {
            Some(_) => Some(entry.surface().map_err(Failure::input)?),
            None => None,
        };
        let algebra = match &surface {
            Some(s) => s.algebra().clone(),
            None => entry.expected_algebra().map_err(Failure::input)?,
        };
        Ok(Input { algebra, surface, entry: Some(entry) })
    }

    fn from_text(text: &str) -> Result<Input, Failure> {
        let v: Value = serde_json::from_str(text).map_err(Failure::input)?;
        if v.get("polygons").is_some() {
            let j: SurfaceJson = serde_json::from_value(v).map_err(Failure::input)?;
            let s = j.to_surface().map_err(Failure::input)?;
            Ok(Input { algebra: s.algebra().clone(), surface: Some(s), entry: None })
        } else if v.get("algebra").is_some() && v.get("id").is_some() {
            let e: CorpusEntry = serde_json::from_value(v).map_err(Failure::input)?;
            Input::from_entry(e)
        } else if v.get("vertices").is_some() {
            let j: AlgebraJson = serde_json::from_value(v).map_err(Failure::input)?;
            Ok(Input { algebra: j.to_algebra().map_err(Failure::input)?, surface: None, entry: None })
        } else {
            Err(Failure::input("neither an algebra (vertices, arrows, relations) nor a surface (arcs, polygons)"))
        }
    }

    fn surface(&self) -> Result<&DissectedSurface, Failure> {
        self.surface.as_ref().ok_or_else(|| Failure::input("this command needs a surface, not a bare algebra"))
    }

    fn string(&self, text: &str) -> Result<StringWord, Failure> {
        self.algebra.parse_string(text).map_err(Failure::input)
    }

    /// A named arc of the corpus entry, or a string.
    fn arc(&self, text: &str) -> Result<StringWord, Failure> {
        if let Some(e) = &self.entry {
            if e.arcs.contains_key(text) {
                return e.arc_string(&self.algebra, text).map_err(Failure::input);
            }
        }
        self.string(text)
    }

    /// Summands given on the command line, by --module, or the entry's only module.
    fn module(&self, strings: &[String], opts: &Opts) -> Result<(String, Vec<StringWord>), Failure> {
        if !strings.is_empty() {
            let m = strings.iter().map(|s| self.string(s)).collect::<Result<Vec<_>, _>>()?;
            return Ok((strings.join(" + "), m));
        }
        let e = self.entry.as_ref().ok_or_else(|| Failure::input("give the summands as strings or use --module"))?;
        let name = match &opts.module {
            Some(n) => n.clone(),
            None if e.modules.len() == 1 => e.modules.keys().next().unwrap().clone(),
            None => {
                return Err(Failure::input(format!(
                    "corpus entry `{}` has modules {:?}; choose one with --module",
                    e.id,
                    e.modules.keys().collect::<Vec<_>>()
                )))
            }
        };
        Ok((name.clone(), e.module(&self.algebra, &name).map_err(Failure::input)?))
    }

    fn budget(&self, opts: &Opts) -> SearchBudget {
        let mut b = SearchBudget::for_algebra(&self.algebra);
        if let Some(l) = opts.max_len.or_else(|| self.entry.as_ref().and_then(|e| e.expected.max_len)) {
            b.max_string_length = l;
        }
        if let Some(c) = opts.cap {
            b.resolution_cap = c;
        }
        b
    }

    fn engine(&self, opts: &Opts) -> TiltingEngine<'_> {
        match &self.surface {
            Some(s) => TiltingEngine::with_surface(s, self.budget(opts)),
            None => TiltingEngine::new(&self.algebra, self.budget(opts)),
        }
    }

    fn oracle(&self, opts: &Opts) -> Oracle<'_> {
        match opts.cap {
            Some(c) => Oracle::with_cap(&self.algebra, c),
            None => Oracle::new(&self.algebra),
        }
    }
}

fn fmt(alg: &GentleAlgebra, w: &StringWord) -> String {
    alg.format_string(w)
}

fn algebra_text(alg: &GentleAlgebra) -> String {
    let q = alg.quiver();
    let arrows: Vec<String> = q
        .arrows()
        .iter()
        .map(|a| format!("{}: {} -> {}", a.id, q.vertex_name(a.source), q.vertex_name(a.target)))
        .collect();
    let rels: Vec<String> =
        alg.relations_in_order().iter().map(|&(x, y)| format!("{}{}", q.arrow(x).id, q.arrow(y).id)).collect();
    format!(
        "vertices: {}\narrows: {}\nrelations: {}",
        q.vertex_names().join(" "),
        if arrows.is_empty() { "none".to_string() } else { arrows.join(", ") },
        if rels.is_empty() { "none".to_string() } else { rels.join(", ") }
    )
}

fn pd_json(p: ProjDim) -> Value {
    match p {
        ProjDim::Finite(d) => json!(d),
        ProjDim::Infinite => json!("infinite"),
        ProjDim::Undetermined => json!("undetermined"),
    }
}

pub fn run(cli: &Cli) -> Report {
    execute(cli).unwrap_or_else(|f| f.report())
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Validate { file } => validate(Input::load(file.as_ref(), opts)?),
        Command::Algebra { file } => {
            let input = Input::load(file.as_ref(), opts)?;
            input.surface()?;
            Ok(Report::ok(serde_json::to_value(AlgebraJson::from_algebra(&input.algebra)).unwrap(), algebra_text(&input.algebra)))
        }
        Command::Strings { file } => {
            let input = Input::load(file.as_ref(), opts)?;
            let max_len = opts.max_len.unwrap_or(4);
            let strings: Vec<String> = input.algebra.enumerate_strings(max_len).iter().map(|w| fmt(&input.algebra, w)).collect();
            Ok(Report::ok(
                json!({ "max_len": max_len, "count": strings.len(), "strings": strings }),
                format!("{} strings up to length {max_len}\n{}", strings.len(), strings.join("\n")),
            ))
        }
        Command::Ext { x, y, file } => ext(Input::load(file.as_ref(), opts)?, x, y, opts),
        Command::Pd { x, file } => pd(Input::load(file.as_ref(), opts)?, x, opts),
        Command::Pretilting(a) => pretilting(Input::load(a.file.as_ref(), opts)?, &a.strings, opts, false),
        Command::Tilting(a) => pretilting(Input::load(a.file.as_ref(), opts)?, &a.strings, opts, true),
        Command::Complete(a) => complete(Input::load(a.file.as_ref(), opts)?, &a.strings, opts),
        Command::Complements(a) => complements(Input::load(a.file.as_ref(), opts)?, &a.strings, opts),
        Command::Cut { arc, file } => cut(Input::load(file.as_ref(), opts)?, arc, opts),
        Command::CutAlgebra { arc, file } => cut_algebra(Input::load(file.as_ref(), opts)?, arc),
        Command::Verify { suite } => verify(suite, opts),
        Command::Reproduce { id } => reproduce(id),
        Command::EmitDot(a) => emit_cmd(a, opts, false),
        Command::EmitTikz(a) => emit_cmd(a, opts, true),
    }
}

fn validate(input: Input) -> Result<Report, Failure> {
    let q = input.algebra.quiver();
    let mut j = json!({
        "valid": true,
        "vertices": q.vertex_count(),
        "arrows": q.arrow_count(),
        "relations": input.algebra.relations().len(),
    });
    let mut text = format!(
        "valid gentle algebra: {} vertices, {} arrows, {} relations",
        q.vertex_count(),
        q.arrow_count(),
        input.algebra.relations().len()
    );
    if let Some(s) = &input.surface {
        j["surface"] = json!({
            "rank": s.rank(),
            "boundary_points": s.circle_count(),
            "bullets": s.bullet_count(),
            "punctures": s.puncture_count(),
            "boundary_components": s.boundary_components(),
            "genus": s.genus(),
            "euler_characteristic": s.euler_characteristic(),
        });
        text = format!(
            "valid dissected surface: rank {}, genus {}, {} boundary components, {} boundary marked points, {} punctures\n{text}",
            s.rank(),
            s.genus(),
            s.boundary_components(),
            s.circle_count(),
            s.puncture_count()
        );
    }
    Ok(Report::ok(j, text))
}

fn ext(input: Input, x: &str, y: &str, opts: &Opts) -> Result<Report, Failure> {
    let (wx, wy) = (input.string(x)?, input.string(y)?);
    let oracle = input.oracle(opts);
    let top = match oracle.pd(&wx) {
        ProjDim::Finite(d) => d,
        _ => input.algebra.rank() + 2,
    };
    let dims = oracle.ext(&wx, &wy, top);
    let mut j = json!({ "x": fmt(&input.algebra, &wx), "y": fmt(&input.algebra, &wy), "pd_x": pd_json(oracle.pd(&wx)), "ext": dims });
    let shown: Vec<String> = dims
        .iter()
        .enumerate()
        .map(|(i, d)| format!("Ext^{i} = {}", d.map_or("?".to_string(), |d| d.to_string())))
        .collect();
    let mut text = format!("{}\n{}", format_args!("Ext(M({x}), M({y}))"), shown.join("\n"));
    let mut code = EXIT_OK;
    if dims.iter().any(Option::is_none) {
        code = EXIT_BUDGET;
        text.push_str("\nsome degrees are undetermined at this resolution cap");
    }
    if let Some(s) = &input.surface {
        let (ax, ay) = (arc_from_string(s, &wx).map_err(Failure::input)?, arc_from_string(s, &wy).map_err(Failure::input)?);
        if ax.has_boundary_ends() && ay.has_boundary_ends() {
            let geo = ext_dims_geometric(s, &ax, &ay).map_err(Failure::input)?;
            let agree = dims.iter().enumerate().all(|(i, d)| *d == Some(geo.get(i).copied().unwrap_or(0)))
                && geo.len() <= dims.len();
            j["geometric"] = json!(geo);
            j["agree"] = json!(agree);
            text.push_str(&format!("\ngeometric intersections by weight: {geo:?}"));
            if !agree {
                code = EXIT_VIOLATION;
                text.push_str("\ngeometric and algebraic dimensions differ");
            }
        }
    }
    Ok(Report { code, json: j, text })
}

fn pd(input: Input, x: &str, opts: &Opts) -> Result<Report, Failure> {
    let w = input.string(x)?;
    let p = input.oracle(opts).pd(&w);
    let mut j = json!({ "string": fmt(&input.algebra, &w), "pd": pd_json(p) });
    let mut text = format!("pd M({}) = {p}", fmt(&input.algebra, &w));
    if let Some(s) = &input.surface {
        let arc = arc_from_string(s, &w).map_err(Failure::input)?;
        let weights = [arc.start.weight(), arc.end.weight()];
        j["endpoint_weights"] = json!(weights);
        j["weight_prediction"] = match arc.predicted_pd() {
            Some(d) => json!(d),
            None => json!("infinite"),
        };
        let show = |w: Option<usize>| w.map_or("puncture".to_string(), |w| w.to_string());
        text.push_str(&format!("\nendpoint weights: {}, {}", show(weights[0]), show(weights[1])));
        let predicted = arc.predicted_pd().map_or(ProjDim::Infinite, ProjDim::Finite);
        if p != ProjDim::Undetermined {
            j["weights_agree"] = json!(p == predicted);
            if p != predicted {
                text.push_str(&format!("\nthe endpoint weights predict {predicted}"));
                return Ok(Report { code: EXIT_VIOLATION, json: j, text });
            }
        }
    }
    let code = if p == ProjDim::Undetermined { EXIT_BUDGET } else { EXIT_OK };
    Ok(Report { code, json: j, text })
}

fn pretilting(input: Input, strings: &[String], opts: &Opts, full: bool) -> Result<Report, Failure> {
    let (name, m) = input.module(strings, opts)?;
    let engine = input.engine(opts);
    let n = input.algebra.rank();
    let (ok, reason) = match engine.check_pretilting(&m) {
        Ok(c) if full && c.len() != n => (false, format!("{} summands, a tilting module needs {n}", c.len())),
        Ok(_) => (true, String::new()),
        Err(TiltingError::NotPretilting(r)) => (false, r),
        Err(e) => return Err(tilting_failure(e)),
    };
    let what = if full { "tilting" } else { "pre-tilting" };
    let j = json!({ "module": name, "summands": m.len(), "property": what, "holds": ok, "reason": reason });
    let text = if ok { format!("{name} is {what}") } else { format!("{name} is not {what}: {reason}") };
    Ok(Report { code: if ok { EXIT_OK } else { EXIT_VIOLATION }, json: j, text })
}

fn complete(input: Input, strings: &[String], opts: &Opts) -> Result<Report, Failure> {
    let (name, m) = input.module(strings, opts)?;
    let engine = input.engine(opts);
    match engine.complete_pretilting(&m).map_err(tilting_failure)? {
        Completion::Found(t) => {
            let summands: Vec<String> = t.iter().map(|w| fmt(&input.algebra, w)).collect();
            Ok(Report::ok(
                json!({ "module": name, "result": "Found", "tilting_module": summands }),
                format!("completion of {name}:\n{}", summands.join("\n")),
            ))
        }
        Completion::NotFoundWithinBound { max_string_length, candidates } => Ok(Report {
            code: EXIT_BUDGET,
            json: json!({
                "module": name,
                "result": "NotFoundWithinBound",
                "max_string_length": max_string_length,
                "rigid_candidates": candidates,
            }),
            text: format!(
                "NotFoundWithinBound: no tilting module contains {name} among {candidates} rigid strings of length at most {max_string_length} (this is not a proof that none exists)"
            ),
        }),
    }
}

fn complements(input: Input, strings: &[String], opts: &Opts) -> Result<Report, Failure> {
    let (name, m) = input.module(strings, opts)?;
    let report = input.engine(opts).find_complements(&m).map_err(tilting_failure)?;
    let mut j = serde_json::to_value(&report).unwrap();
    j["module"] = json!(name);
    j["count"] = json!(report.complements.len());
    let text = format!(
        "{} complements of {name} within length {}:\n{}",
        report.complements.len(),
        report.budget.max_string_length,
        report.complements.join("\n")
    );
    Ok(Report::ok(j, text))
}

fn cut(input: Input, arc: &str, opts: &Opts) -> Result<Report, Failure> {
    let s = input.surface()?;
    let w = input.arc(arc)?;
    let gamma = arc_from_string(s, &w).map_err(Failure::input)?;
    let result = cut_surface(s, &gamma).map_err(cut_failure)?;
    let census = result.census();
    let j = serde_json::to_value(result.to_json(opts.max_len.unwrap_or(3))).unwrap();
    let t = &result.surface;
    let text = format!(
        "cut along {} (case {}): rank {} -> {}, boundary points {} -> {}, arrows {} -> {}\nbigon arcs: {}, {}\n{}",
        fmt(&input.algebra, &w),
        result.case.label(),
        census.rank.0,
        census.rank.1,
        census.circles.0,
        census.circles.1,
        census.arrows.0,
        census.arrows.1,
        fmt(t.algebra(), &result.gamma1.string),
        fmt(t.algebra(), &result.gamma2.string),
        algebra_text(t.algebra())
    );
    let code = if census.holds() { EXIT_OK } else { EXIT_VIOLATION };
    Ok(Report { code, json: j, text })
}

fn cut_algebra(input: Input, arc: &str) -> Result<Report, Failure> {
    let w = input.arc(arc)?;
    let direct = appendix_cut_algebra(&input.algebra, &w).map_err(Failure::input)?;
    let mut j = json!({ "algebra": AlgebraJson::from_algebra(&direct) });
    let mut text = algebra_text(&direct);
    let mut code = EXIT_OK;
    if let Some(s) = &input.surface {
        let gamma = arc_from_string(s, &w).map_err(Failure::input)?;
        let surgery = cut_surface(s, &gamma).map_err(cut_failure)?;
        let same = quiver_isomorphic(&direct, surgery.surface.algebra()).is_some();
        j["agrees_with_surgery"] = json!(same);
        text.push_str(&format!("\nagrees with the surgery: {same}"));
        if !same {
            code = EXIT_VIOLATION;
        }
    }
    Ok(Report { code, json: j, text })
}

fn verify(suite: &str, opts: &Opts) -> Result<Report, Failure> {
    let s = Suite::parse(suite).ok_or_else(|| {
        Failure::input(format!(
            "unknown suite `{suite}`; choose ext-equivalence, pd-weights, cut-invariants, complement-bounds or all"
        ))
    })?;
    let report = run_suite(s, opts.seed);
    let text = report.checks.iter().map(|c| c.line()).collect::<Vec<_>>().join("\n");
    let code = if report.passed() { EXIT_OK } else { EXIT_VIOLATION };
    Ok(Report { code, json: serde_json::to_value(&report).unwrap(), text })
}

fn reproduce(id: &str) -> Result<Report, Failure> {
    let entry = corpus::load(id).map_err(Failure::input)?;
    let expected = entry.expected_algebra().map_err(Failure::input)?;
    let mut checks: Vec<(String, bool, String)> = Vec::new();
    let mut text = vec![format!("{}: {}", entry.id, entry.description)];
    let mut code = EXIT_OK;

    let algebra = if let Some(d) = &entry.derived_from {
        let source = corpus::load(&d.entry).map_err(Failure::input)?;
        let s = source.surface().map_err(Failure::input)?;
        let arcs = d
            .cut
            .iter()
            .map(|name| {
                let w = source.arc_string(s.algebra(), name).map_err(Failure::input)?;
                arc_from_string(&s, &w).map_err(Failure::input)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cut = cut_along_collection(&s, &arcs).map_err(cut_failure)?;
        let source_ok = quiver_isomorphic(s.algebra(), &source.expected_algebra().map_err(Failure::input)?).is_some();
        checks.push((format!("algebra of {}", d.entry), source_ok, String::new()));
        text.push(format!("A ({}):\n{}", d.entry, algebra_text(s.algebra())));
        text.push(format!("A cut along {}:\n{}", d.cut.join(", "), algebra_text(cut.surface().algebra())));
        let census_ok = cut.steps.iter().all(|c| c.census().holds());
        checks.push(("cut census".into(), census_ok, String::new()));
        cut.surface().algebra().clone()
    } else {
        let input = Input::from_entry(entry.clone())?;
        text.push(format!("A:\n{}", algebra_text(&input.algebra)));
        input.algebra
    };
    let iso = quiver_isomorphic(&algebra, &expected).is_some();
    checks.push(("isomorphic to the expected algebra".into(), iso, String::new()));

    if entry.surface.is_some() {
        let input = Input::from_entry(entry.clone())?;
        let max_len = entry.expected.max_len;
        let budget = match max_len {
            Some(l) => SearchBudget::for_algebra(&input.algebra).with_max_len(l),
            None => SearchBudget::for_algebra(&input.algebra),
        };
        let engine = TiltingEngine::with_surface(input.surface()?, budget);
        for (name, want) in &entry.expected.complements {
            let m = entry.module(&input.algebra, name).map_err(Failure::input)?;
            let r = engine.find_complements(&m).map_err(tilting_failure)?;
            let got = r.complements.len();
            checks.push((format!("{name} has {want} complements"), got == *want, format!("found {got}: {}", r.complements.join(", "))));
        }
        for (name, want) in &entry.expected.completes {
            let m = entry.module(&input.algebra, name).map_err(Failure::input)?;
            let found = matches!(engine.complete_pretilting(&m).map_err(tilting_failure)?, Completion::Found(_));
            let detail = if found {
                "a completion exists".to_string()
            } else {
                format!("NotFoundWithinBound at length {}", budget.max_string_length)
            };
            checks.push((format!("{name} completes: {want}"), found == *want, detail));
        }
    }

    for (what, ok, detail) in &checks {
        text.push(format!("{} {what}{}", if *ok { "ok  " } else { "FAIL" }, if detail.is_empty() { String::new() } else { format!(" ({detail})") }));
        if !ok {
            code = EXIT_VIOLATION;
        }
    }
    let j = json!({
        "id": entry.id,
        "algebra": AlgebraJson::from_algebra(&algebra),
        "checks": checks.iter().map(|(w, ok, d)| json!({ "check": w, "holds": ok, "detail": d })).collect::<Vec<_>>(),
        "reproduced": code == EXIT_OK,
    });
    Ok(Report { code, json: j, text: text.join("\n") })
}

fn emit_cmd(a: &EmitArgs, opts: &Opts, tikz: bool) -> Result<Report, Failure> {
    let input = Input::load(a.file.as_ref(), opts)?;
    let cut_surface_owned;
    let surface = match &a.arc {
        Some(arc) => {
            let s = input.surface()?;
            let w = input.arc(arc)?;
            let gamma = arc_from_string(s, &w).map_err(Failure::input)?;
            cut_surface_owned = cut_surface(s, &gamma).map_err(cut_failure)?.surface;
            Some(&cut_surface_owned)
        }
        None => input.surface.as_ref(),
    };
    let text = match (a.dissection, surface, tikz) {
        (true, Some(s), false) => emit::surface_to_dot(s),
        (true, Some(s), true) => emit::surface_to_tikz(s),
        (true, None, _) => return Err(Failure::input("--dissection needs a surface")),
        (false, s, false) => emit::algebra_to_dot(s.map_or(&input.algebra, |s| s.algebra())),
        (false, s, true) => emit::algebra_to_tikz(s.map_or(&input.algebra, |s| s.algebra())),
    };
    Ok(Report::ok(json!({ "format": if tikz { "tikz" } else { "dot" }, "text": text }), text))
}

/// Runs the command and writes its output; returns the exit code.
pub fn main_with(cli: &Cli) -> i32 {
    let report = run(cli);
    let out = report.render(cli.opts.json);
    match &cli.opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{out}"),
    }
    report.code
}
