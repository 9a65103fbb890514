//! `clspace`: closure space operations on JSON documents.
//!
//! Query verbs print a JSON payload and exit 0. Check verbs additionally
//! exit 5 when the checked claim fails, so scripts can branch on it.
//! Exit codes: 2 unreadable input, 3 invalid document, 4 hypothesis not
//! met (wrong kind of span or space), 5 failed check. Errors go to stderr
//! as one JSON object.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use closure_space::doc::{
    read_json, AttachDoc, CwDoc, DocError, MapDoc, SpaceDoc, SpanDoc,
};
use closure_space::verify::DEFAULT_COCONE_BOUND;
use closure_space::{
    check_prop1, check_theorem_main, coequalizer, coproduct, mine_certificates, product, pushout,
    pushout_along_closed_inclusion, top_pushout, verify_universal_property, Certificate,
    ColimitError, MiningBounds, Provenance, PushoutResult, Space, SpaceMap, TopOracleError,
    VerifyError,
};

#[derive(Parser)]
#[command(name = "clspace", version, about = "Finite closure spaces: glue, coarsen, check")]
struct Cli {
    /// Write the payload to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a space document for well-formedness.
    Validate { space: PathBuf },
    /// Closure of a set of points, given by label.
    Closure {
        space: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Topological modification (iterate the operator to idempotence).
    Tau { space: PathBuf },
    /// Is the operator already idempotent? Lists offending points if not.
    IsTopological { space: PathBuf },
    /// Subspace on a set of points, given by label.
    Subspace {
        space: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Disjoint union of any number of spaces.
    Coproduct {
        #[arg(required = true)]
        spaces: Vec<PathBuf>,
    },
    /// Quotient identifying the images of two parallel maps.
    Coequalizer { f: PathBuf, g: PathBuf },
    /// Binary product with componentwise closure.
    Product { left: PathBuf, right: PathBuf },
    /// Glue a span; the general construction unless told otherwise.
    Pushout {
        span: PathBuf,
        /// Use the closed-inclusion construction, which keeps base labels;
        /// exits 4 when the i-leg is not a closed subspace inclusion.
        #[arg(long)]
        via_closed_inclusion: bool,
    },
    /// The reference pushout computed inside topological spaces.
    TopPushout { span: PathBuf },
    /// Attach one batch of cells to a base space.
    Attach { attachment: PathBuf },
    /// Run a staged cell build and report every intermediate space.
    BuildCw { plan: PathBuf },
    /// Evaluate the single-attachment statement on a span.
    CheckProp1 { span: PathBuf },
    /// Evaluate the staged-build statement on a plan.
    CheckMain { plan: PathBuf },
    /// Verify the glueing's mapping property against small cocones.
    CheckUniversal {
        span: PathBuf,
        #[arg(long, default_value_t = DEFAULT_COCONE_BOUND)]
        bound: usize,
    },
    /// Sample spans from a bounded universe and emit certificates for
    /// every glueing that leaves topological spaces, one JSON per line.
    Mine {
        /// Universe bounds: max apex, max X, max Y point counts.
        #[arg(long, value_delimiter = ',', default_value = "3,4,4")]
        bounds: Vec<usize>,
        #[arg(long, default_value_t = 5000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to spans with a closed attaching map, where any
        /// certificate refutes the forward statement.
        #[arg(long)]
        require_closed_f: bool,
    },
    /// Re-derive every certificate in a JSONL file from scratch.
    Replay { certificates: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
    /// Some check verbs still have a payload worth delivering (the full
    /// report) even though they exit nonzero.
    payload: Option<String>,
}

fn fail(code: u8, message: impl Display) -> Failure {
    Failure { code, message: message.to_string(), payload: None }
}

fn fail_with_payload(code: u8, payload: String, message: impl Display) -> Failure {
    Failure { code, message: message.to_string(), payload: Some(payload) }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Failure {
        let code = match &e {
            DocError::Io { .. } | DocError::Parse { .. } => 2,
            DocError::Colimit(ColimitError::NotClosedInclusion) => 4,
            _ => 3,
        };
        fail(code, e)
    }
}

impl From<ColimitError> for Failure {
    fn from(e: ColimitError) -> Failure {
        match e {
            ColimitError::NotClosedInclusion => fail(4, e),
            _ => fail(3, e),
        }
    }
}

impl From<TopOracleError> for Failure {
    fn from(e: TopOracleError) -> Failure {
        match e {
            TopOracleError::Space(_) => fail(3, e),
            _ => fail(4, e),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Failure {
        match e {
            VerifyError::TooLarge { .. } => fail(4, e),
            VerifyError::Colimit(inner) => inner.into(),
            VerifyError::Doc(inner) => inner.into(),
            other => fail(3, other),
        }
    }
}

fn doc_dir(path: &Path) -> &Path {
    path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."))
}

fn load_space(path: &Path) -> Result<Space, Failure> {
    let doc: SpaceDoc = read_json(path)?;
    Ok(doc.build()?)
}

fn load_span(path: &Path) -> Result<closure_space::Span, Failure> {
    let doc: SpanDoc = read_json(path)?;
    Ok(doc.build(doc_dir(path))?)
}

fn space_value(space: &Space) -> Value {
    serde_json::to_value(SpaceDoc::from_space(space)).expect("space documents serialize")
}

fn map_value(map: &SpaceMap) -> Value {
    serde_json::to_value(map.label_pairs()).expect("label tables serialize")
}

fn provenance_value(provenance: &Provenance) -> Value {
    serde_json::to_value(&provenance.0).expect("provenance serializes")
}

fn glueing_value(result: &PushoutResult) -> Value {
    json!({
        "space": space_value(&result.space),
        "j": map_value(&result.j),
        "g": map_value(&result.g),
        "provenance": provenance_value(&result.provenance),
    })
}

fn labels_value(space: &Space, set: closure_space::PointSet) -> Value {
    json!(space.labels_of(set))
}

fn run(command: Command) -> Result<String, Failure> {
    let payload = match command {
        Command::Validate { space } => {
            let doc: SpaceDoc = read_json(&space)?;
            let violations = doc.validate();
            if !violations.is_empty() {
                let listed: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                return Err(fail(3, json!({ "violations": listed })));
            }
            let built = doc.build()?;
            json!({
                "valid": true,
                "points": built.point_count(),
                "topological": built.is_topological(),
            })
        }
        Command::Closure { space, set } => {
            let space = load_space(&space)?;
            let refs: Vec<&str> = set.iter().map(String::as_str).collect();
            let of = space.subset_of_labels(&refs).map_err(|e| fail(3, e))?;
            json!({
                "set": labels_value(&space, of),
                "closure": labels_value(&space, space.closure(of)),
            })
        }
        Command::Tau { space } => {
            let space = load_space(&space)?;
            space_value(&space.topological_modification())
        }
        Command::IsTopological { space } => {
            let space = load_space(&space)?;
            let offenders: Vec<&str> = space
                .points()
                .filter(|&p| {
                    let once = space.singleton_closure(p);
                    space.closure(once) != once
                })
                .map(|p| space.label(p))
                .collect();
            json!({ "topological": space.is_topological(), "non_idempotent_points": offenders })
        }
        Command::Subspace { space, set } => {
            let space = load_space(&space)?;
            let refs: Vec<&str> = set.iter().map(String::as_str).collect();
            let members = space.subset_of_labels(&refs).map_err(|e| fail(3, e))?;
            let (sub, _) = closure_space::map::subspace(&space, members);
            space_value(&sub)
        }
        Command::Coproduct { spaces } => {
            let built: Vec<Space> =
                spaces.iter().map(|p| load_space(p)).collect::<Result<_, _>>()?;
            let (sum, injections) = coproduct(&built)?;
            json!({
                "space": space_value(&sum),
                "injections": injections.iter().map(map_value).collect::<Vec<_>>(),
            })
        }
        Command::Coequalizer { f, g } => {
            let f_doc: MapDoc = read_json(&f)?;
            let g_doc: MapDoc = read_json(&g)?;
            let f = f_doc.build(doc_dir(&f))?;
            let g = g_doc.build(doc_dir(&g))?;
            let (quotient, projection) = coequalizer(&f, &g)?;
            json!({
                "space": space_value(&quotient),
                "projection": map_value(&projection),
            })
        }
        Command::Product { left, right } => {
            let left = load_space(&left)?;
            let right = load_space(&right)?;
            let (prod, fst, snd) = product(&left, &right).map_err(|e| fail(3, e))?;
            json!({
                "space": space_value(&prod),
                "fst": map_value(&fst),
                "snd": map_value(&snd),
            })
        }
        Command::Pushout { span, via_closed_inclusion } => {
            let span = load_span(&span)?;
            let result = if via_closed_inclusion {
                pushout_along_closed_inclusion(&span)?
            } else {
                pushout(&span)?
            };
            glueing_value(&result)
        }
        Command::TopPushout { span } => {
            let span = load_span(&span)?;
            space_value(&top_pushout(&span)?)
        }
        Command::Attach { attachment } => {
            let doc: AttachDoc = read_json(&attachment)?;
            let build = doc.build(doc_dir(&attachment))?;
            let stage = build.stages.last().expect("a single-stage build has its stage");
            json!({
                "space": space_value(&stage.space),
                "base_inclusion": map_value(&stage.inclusion),
                "characteristic": stage.characteristic.iter().map(map_value).collect::<Vec<_>>(),
            })
        }
        Command::BuildCw { plan } => {
            let doc: CwDoc = read_json(&plan)?;
            let build = doc.build(doc_dir(&plan))?;
            json!({
                "final": space_value(build.final_space()),
                "base_inclusion": map_value(&build.base_inclusion().map_err(DocError::from)?),
                "stages": build
                    .stages
                    .iter()
                    .map(|stage| json!({
                        "points": stage.space.point_count(),
                        "topological": stage.space.is_topological(),
                    }))
                    .collect::<Vec<_>>(),
            })
        }
        Command::CheckProp1 { span } => {
            let span = load_span(&span)?;
            let report = check_prop1(&span)?;
            let payload = serde_json::to_string_pretty(&report).expect("reports serialize");
            if !report.implications_hold() {
                return Err(fail_with_payload(5, payload, "an implication of the statement failed"));
            }
            return Ok(payload);
        }
        Command::CheckMain { plan } => {
            let doc: CwDoc = read_json(&plan)?;
            let base = doc.base.resolve(doc_dir(&plan))?;
            let report = check_theorem_main(base, &doc.stages)?;
            let payload = serde_json::to_string_pretty(&report).expect("reports serialize");
            if !report.gated_assertions_hold() {
                return Err(fail_with_payload(
                    5,
                    payload,
                    "a stage with verified hypotheses is not topological",
                ));
            }
            return Ok(payload);
        }
        Command::CheckUniversal { span, bound } => {
            if bound > DEFAULT_COCONE_BOUND {
                return Err(fail(2, format!("--bound is capped at {DEFAULT_COCONE_BOUND}")));
            }
            let span = load_span(&span)?;
            let result = pushout(&span)?;
            let holds = verify_universal_property(&span, &result, bound)?;
            let payload = serde_json::to_string_pretty(&json!({ "holds": holds, "bound": bound }))
                .expect("payloads serialize");
            if !holds {
                return Err(fail_with_payload(5, payload, "a small cocone fails to factor uniquely"));
            }
            return Ok(payload);
        }
        Command::Mine { bounds, budget, seed, require_closed_f } => {
            let [max_apex, max_x, max_y] = bounds[..] else {
                return Err(fail(2, "--bounds takes exactly three values: apex,x,y"));
            };
            let bounds = MiningBounds { max_apex, max_x, max_y };
            let outcome = mine_certificates(&bounds, budget, seed, require_closed_f)?;
            eprintln!(
                "{}",
                json!({
                    "scanned": outcome.scanned,
                    "sampled": outcome.sampled,
                    "certificates": outcome.certificates.len(),
                })
            );
            let lines: Vec<String> =
                outcome.certificates.iter().map(Certificate::to_json_line).collect();
            // Restricted to closed attaching maps, any certificate refutes
            // the forward statement; surface that as a failed check.
            if require_closed_f && !lines.is_empty() {
                return Err(fail_with_payload(
                    5,
                    lines.join("\n"),
                    "closed attaching maps produced a non-topological glueing",
                ));
            }
            return Ok(lines.join("\n"));
        }
        Command::Replay { certificates } => {
            let text = std::fs::read_to_string(&certificates)
                .map_err(|e| fail(2, format!("reading {}: {e}", certificates.display())))?;
            let dir = doc_dir(&certificates).to_path_buf();
            let mut results = Vec::new();
            let mut failures = 0usize;
            for (index, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let certificate: Certificate = serde_json::from_str(line)
                    .map_err(|e| fail(2, format!("certificate line {}: {e}", index + 1)))?;
                let holds = certificate.replay(&dir)?;
                if !holds {
                    failures += 1;
                }
                results.push(json!({ "line": index + 1, "holds": holds }));
            }
            let payload =
                serde_json::to_string_pretty(&json!({ "replayed": results.len(), "results": results }))
                    .expect("results serialize");
            if failures > 0 {
                return Err(fail_with_payload(
                    5,
                    payload,
                    format!("{failures} certificates no longer hold"),
                ));
            }
            return Ok(payload);
        }
    };
    Ok(serde_json::to_string_pretty(&payload).expect("payloads serialize"))
}

// Plain println! panics when the reader goes away (clspace ... | head);
// dropping the tail of the payload is the right behavior there.
fn print_payload(payload: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{payload}");
}

fn deliver(out: Option<&Path>, payload: &str) -> Result<(), ExitCode> {
    match out {
        Some(path) => std::fs::write(path, format!("{payload}\n")).map_err(|e| {
            eprintln!("{}", json!({ "error": format!("writing {}: {e}", path.display()) }));
            ExitCode::from(2)
        }),
        None => {
            print_payload(payload);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(payload) => match deliver(cli.out.as_deref(), &payload) {
            Ok(()) => ExitCode::SUCCESS,
            Err(code) => code,
        },
        Err(failure) => {
            if let Some(payload) = &failure.payload {
                if let Err(code) = deliver(cli.out.as_deref(), payload) {
                    return code;
                }
            }
            eprintln!("{}", json!({ "error": failure.message }));
            ExitCode::from(failure.code)
        }
    }
}
