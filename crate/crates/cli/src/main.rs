use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cikit::ci_ideal::{containment_report, prob_ring_with, sum_ci_ideals_in, StateVector};
use cikit::ci_model::{enumerate_elementary, enumerate_structural, sigma};
use cikit::cone::Cone;
use cikit::imset::{build_matrix, decompose, elementary_imset};
use cikit::poly::{dim_degree, ideal_equal, MonomialOrder};
use cikit::relation_lang::parse_statement;
use cikit::toric::{
    binomial_json, classify, degree_profile, graver_basis_progress, kernel_basis, markov_basis_with, Saturation,
    ToricBinomial,
};
use cikit::{reports, verify, Budget, CIStatement, Error};

#[derive(Parser, Debug)]
#[command(name = "cikit", version, about = "Imsets, toric bases, cone face lattices and CI ideals, in exact arithmetic")]
struct Cli {
    /// number of random variables
    #[arg(short = 'n', global = true)]
    n: Option<u8>,
    /// states per variable, e.g. 2,3,2 (defaults to all binary)
    #[arg(long, global = true)]
    states: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// wall-clock budget for long computations (per cell for reports)
    #[arg(long, global = true, default_value_t = 600.0)]
    budget_secs: f64,
    /// write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// CI statements and their imsets
    #[command(subcommand)]
    Imsets(ImsetsCmd),
    /// Kernel, Markov and Graver bases of the elementary imset matrix
    #[command(subcommand)]
    Toric(ToricCmd),
    /// The cone of elementary imsets
    #[command(subcommand)]
    Cone(ConeCmd),
    /// CI ideals in the ring of joint probabilities
    #[command(subcommand)]
    Ideal(IdealCmd),
    /// Check relation files under the imset map
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Recompute a published table
    Report(ReportArgs),
}

#[derive(Subcommand, Debug)]
enum ImsetsCmd {
    /// List elementary statements (or non-elementary ones with --structural)
    Enumerate {
        #[arg(long)]
        structural: bool,
    },
    /// The matrix whose columns are the elementary imsets
    Matrix {
        #[arg(long)]
        csv: bool,
    },
    /// All ways to write a statement's imset as a sum of elementary imsets
    Decompose {
        statement: String,
        #[arg(long, default_value_t = 4)]
        max_terms: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ToricCmd {
    /// Integer kernel basis
    Kernel,
    /// Minimal Markov basis
    Markov {
        #[arg(long)]
        classify: bool,
        #[arg(long, value_enum, default_value_t = SaturationArg::Homogeneous)]
        saturation: SaturationArg,
    },
    /// Graver basis (progress on stderr)
    Graver {
        #[arg(long)]
        classify: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SaturationArg {
    Homogeneous,
    Elimination,
}

#[derive(Subcommand, Debug)]
enum ConeCmd {
    /// Face lattice
    Faces {
        #[arg(long)]
        f_vector: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Facets with inward normals
    Facets,
    /// Whether a set of elementary statements is exactly the ray set of a face
    IsFace { statements: Vec<String> },
}

#[derive(Args, Debug)]
struct StmtList {
    /// statement, repeatable: --stmt "1 _||_ 2 | 3"
    #[arg(long = "stmt", required = true)]
    stmts: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum IdealCmd {
    /// Generators of the sum of the CI ideals
    Build(StmtList),
    /// Krull dimension and degree
    Dimdeg(StmtList),
    /// Containment in both directions
    Contains {
        #[arg(long = "inner", required = true)]
        inner: Vec<String>,
        #[arg(long = "outer", required = true)]
        outer: Vec<String>,
    },
    /// Ideal equality
    Equal {
        #[arg(long = "left", required = true)]
        left: Vec<String>,
        #[arg(long = "right", required = true)]
        right: Vec<String>,
    },
    /// Reduced Gröbner basis
    Gb {
        #[command(flatten)]
        stmts: StmtList,
        #[arg(long, value_enum, default_value_t = OrderArg::Grevlex)]
        order: OrderArg,
        /// list p_{r..r} first instead of p_{1..1}
        #[arg(long)]
        reversed: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Lex,
    Grevlex,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Verdict per line of a relation file
    Relations { file: PathBuf },
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(value_enum)]
    table: Table,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Table {
    Table1,
    Table2,
    Table3,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = Result<(String, Value), Failure>;

struct Ctx {
    n: Option<u8>,
    states: Option<String>,
    budget_secs: f64,
}

impl Ctx {
    fn n(&self) -> Result<u8, Failure> {
        match (self.n, &self.states) {
            (Some(n), _) => Ok(n),
            (None, Some(s)) => Ok(StateVector::parse(s)?.n()),
            (None, None) => Err(Failure::Usage("this command needs -n N".into())),
        }
    }

    fn states(&self, stmts: &[CIStatement]) -> Result<StateVector, Failure> {
        let sv = match (&self.states, self.n) {
            (Some(s), _) => StateVector::parse(s)?,
            (None, Some(n)) => StateVector::binary(n),
            (None, None) => StateVector::binary(stmts.iter().map(|s| s.max_var()).max().unwrap_or(2).max(2)),
        };
        if let Some(n) = self.n {
            if n != sv.n() {
                return Err(Failure::Domain(Error::Domain(format!("-n {n} disagrees with --states {sv}"))));
            }
        }
        Ok(sv)
    }

    fn budget(&self) -> Budget {
        Budget::seconds(self.budget_secs)
    }
}

fn parse_all(list: &[String]) -> Result<Vec<CIStatement>, Failure> {
    list.iter().map(|s| parse_statement(s).map_err(Failure::from)).collect()
}

fn lines<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| format!("{x}\n")).collect()
}

fn imsets(ctx: &Ctx, cmd: &ImsetsCmd) -> Out {
    let n = ctx.n()?;
    match cmd {
        ImsetsCmd::Enumerate { structural: false } => {
            let st = enumerate_elementary(n)?;
            let recs: Vec<Value> = st
                .iter()
                .map(|s| Ok(json!({"statement": s.to_string(), "I": s.left().to_vec(), "J": s.right().to_vec(), "K": s.cond().to_vec(), "imset": elementary_imset(s, n)?.to_json_map()})))
                .collect::<Result<_, Error>>()?;
            Ok((lines(&st), json!({"n": n, "count": sigma(n)?, "statements": recs})))
        }
        ImsetsCmd::Enumerate { structural: true } => {
            let st = enumerate_structural(n)?;
            let text = lines(st.iter().map(|(s, t)| match t {
                Some(t) => format!("{s}\tType {}", t.label()),
                None => s.to_string(),
            }));
            let recs: Vec<Value> = st
                .iter()
                .map(|(s, t)| json!({"statement": s.to_string(), "I": s.left().to_vec(), "J": s.right().to_vec(), "K": s.cond().to_vec(), "type": t.map(|t| t.label())}))
                .collect();
            Ok((text, json!({"n": n, "count": st.len(), "statements": recs})))
        }
        ImsetsCmd::Matrix { csv } => {
            let a = build_matrix(n)?;
            let text = if *csv {
                a.to_csv()
            } else {
                let mut t = format!("{} x {} matrix, rank {}\n", a.num_rows(), a.num_cols(), a.rank());
                t.push_str(&a.to_csv());
                t
            };
            let mut j = a.to_json();
            j["rank"] = json!(a.rank());
            Ok((text, j))
        }
        ImsetsCmd::Decompose { statement, max_terms } => {
            let s = parse_statement(statement)?;
            let ds = decompose(&s, n, *max_terms)?;
            let text = lines(ds.iter().map(|d| d.parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" + ")))
                + &format!("{} decompositions of {s} with at most {max_terms} terms\n", ds.len());
            let recs: Vec<Value> = ds.iter().map(|d| json!(d.parts.iter().map(|p| p.to_string()).collect::<Vec<_>>())).collect();
            Ok((text, json!({"n": n, "target": s.to_string(), "max_terms": max_terms, "count": ds.len(), "decompositions": recs})))
        }
    }
}

fn basis_output(kind: &str, n: u8, basis: &[ToricBinomial], with_classes: bool) -> Out {
    let a = build_matrix(n)?;
    let stmts = a.statements();
    let classes = if with_classes { Some(classify(basis, &a)?) } else { None };
    let mut text = String::new();
    let mut recs = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let c = classes.as_ref().map(|c| &c[i]);
        text.push_str(&b.render(&stmts));
        if let Some(c) = c {
            text.push_str(&format!("\tdeg {} orbit {}{}{}", c.total_degree, c.symmetry_class_id, if c.is_homogeneous { " homogeneous" } else { "" }, if c.is_multilinear { " multilinear" } else { "" }));
        }
        text.push('\n');
        recs.push(binomial_json(b, &a, c));
    }
    let mut j = json!({"n": n, "kind": kind, "count": basis.len(), "binomials": recs});
    text.push_str(&format!("{} {kind} elements\n", basis.len()));
    if let Some(cs) = &classes {
        let prof = degree_profile(cs);
        for (d, count, orbits) in &prof {
            text.push_str(&format!("degree {d}: {count} elements in {orbits} orbits\n"));
        }
        let hom = cs.iter().filter(|c| c.is_homogeneous).count();
        let ml = cs.iter().filter(|c| c.is_homogeneous && c.is_multilinear).count();
        text.push_str(&format!("homogeneous: {hom}; homogeneous and multilinear: {ml}\n"));
        j["profile"] = json!(prof.iter().map(|(d, c, o)| json!({"degree": d, "count": c, "orbits": o})).collect::<Vec<_>>());
        j["homogeneous"] = json!(hom);
        j["homogeneous_multilinear"] = json!(ml);
    }
    Ok((text, j))
}

fn toric(ctx: &Ctx, cmd: &ToricCmd) -> Out {
    let n = ctx.n()?;
    let a = build_matrix(n)?;
    match cmd {
        ToricCmd::Kernel => {
            let k = kernel_basis(&a);
            Ok((lines(k.iter().map(|v| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))), json!({"n": n, "dimension": k.len(), "basis": k})))
        }
        ToricCmd::Markov { classify, saturation } => {
            let method = match saturation {
                SaturationArg::Homogeneous => Saturation::Homogeneous,
                SaturationArg::Elimination => Saturation::Elimination,
            };
            let m = markov_basis_with(&a, method, &ctx.budget())?;
            basis_output("markov", n, &m, *classify)
        }
        ToricCmd::Graver { classify } => {
            let g = graver_basis_progress(&a, &ctx.budget(), |coord, size| {
                eprintln!("graver: {coord}/{} coordinates lifted, {size} elements", a.num_cols());
            })?;
            basis_output("graver", n, &g, *classify)
        }
    }
}

fn cone(ctx: &Ctx, cmd: &ConeCmd, format: &mut Format) -> Out {
    let n = ctx.n()?;
    let c = Cone::new(n)?;
    let stmts = c.statements();
    match cmd {
        ConeCmd::Faces { f_vector, json: as_json, dot } => {
            if *as_json {
                *format = Format::Json;
            }
            let l = c.face_lattice()?;
            let f = l.f_vector();
            let mut apex_zero = f.clone();
            apex_zero[0] = 0;
            let mut text = format!(
                "f-vector (dims 0..{}, apex counted): {:?}\nf-vector (apex entry 0):            {:?}\ntotal faces: {}\ngraded: {}\n",
                c.lin_dim(),
                f,
                apex_zero,
                l.total(),
                l.is_graded()
            );
            if !f_vector {
                for face in &l.faces {
                    let m: Vec<String> = c.face_to_model(face).iter().map(|s| s.to_string()).collect();
                    text.push_str(&format!("dim {}: {{{}}}\n", face.dim, m.join(", ")));
                }
            }
            if *dot {
                text = l.to_dot(&c);
            }
            let mut j = l.to_json();
            j["n"] = json!(n);
            j["f_vector_apex_zero"] = json!(apex_zero);
            j["graded"] = json!(l.is_graded());
            if *f_vector {
                j.as_object_mut().unwrap().remove("faces");
            }
            Ok((text, j))
        }
        ConeCmd::Facets => {
            let fs = c.facets()?;
            let mut text = String::new();
            let mut recs = Vec::new();
            for f in &fs {
                let rays: Vec<usize> = (0..stmts.len()).filter(|i| f.incident_rays >> i & 1 == 1).collect();
                text.push_str(&format!(
                    "normal {:?}; rays {{{}}}\n",
                    f.normal,
                    rays.iter().map(|&i| stmts[i].to_string()).collect::<Vec<_>>().join(", ")
                ));
                recs.push(json!({"normal": f.normal, "rays": rays}));
            }
            text.push_str(&format!("{} facets; cone dimension {}\n", fs.len(), c.lin_dim()));
            Ok((text, json!({"n": n, "lin_dim": c.lin_dim(), "count": fs.len(), "facets": recs})))
        }
        ConeCmd::IsFace { statements } => {
            let s = parse_all(statements)?;
            let fs = c.facets()?;
            let yes = c.is_face(&s, &fs)?;
            let closure = c.closure(c.ray_set(&s)?, &fs);
            let cl: Vec<String> = (0..stmts.len()).filter(|i| closure >> i & 1 == 1).map(|i| stmts[i].to_string()).collect();
            Ok((
                format!("{}\nsmallest face: {{{}}} (dim {})\n", if yes { "face" } else { "not a face" }, cl.join(", "), c.dim_of(closure)),
                json!({"n": n, "is_face": yes, "closure": cl, "closure_dim": c.dim_of(closure)}),
            ))
        }
    }
}

fn ideal(ctx: &Ctx, cmd: &IdealCmd) -> Out {
    let budget = ctx.budget();
    match cmd {
        IdealCmd::Build(l) => {
            let s = parse_all(&l.stmts)?;
            let sv = ctx.states(&s)?;
            let i = sum_ci_ideals_in(&s, &sv, prob_ring_with(&sv, MonomialOrder::GrevLex, false))?;
            let ring = i.ring().clone();
            let mut j = i.to_json();
            j["states"] = json!(sv.states());
            Ok((lines(i.generators().iter().map(|g| ring.format(g))), j))
        }
        IdealCmd::Dimdeg(l) => {
            let s = parse_all(&l.stmts)?;
            let sv = ctx.states(&s)?;
            let i = sum_ci_ideals_in(&s, &sv, prob_ring_with(&sv, MonomialOrder::GrevLex, false))?;
            let dd = dim_degree(&i, &budget)?;
            Ok((format!("dim {} degree {}\n", dd.krull_dim, dd.degree), json!({"states": sv.states(), "dim": dd.krull_dim, "degree": dd.degree})))
        }
        IdealCmd::Contains { inner, outer } => {
            let (a, b) = (parse_all(inner)?, parse_all(outer)?);
            let sv = ctx.states(&[a.clone(), b.clone()].concat())?;
            let ring = prob_ring_with(&sv, MonomialOrder::GrevLex, false);
            let r = containment_report(&sum_ci_ideals_in(&a, &sv, ring.clone())?, &sum_ci_ideals_in(&b, &sv, ring)?, &budget)?;
            Ok((
                format!("inner ⊆ outer: {}\nouter ⊆ inner: {}\n", r.inner_subset_outer, r.outer_subset_inner),
                serde_json::to_value(&r).expect("serializable"),
            ))
        }
        IdealCmd::Equal { left, right } => {
            let (a, b) = (parse_all(left)?, parse_all(right)?);
            let sv = ctx.states(&[a.clone(), b.clone()].concat())?;
            let ring = prob_ring_with(&sv, MonomialOrder::GrevLex, false);
            let eq = ideal_equal(&sum_ci_ideals_in(&a, &sv, ring.clone())?, &sum_ci_ideals_in(&b, &sv, ring)?, &budget)?;
            Ok((format!("{eq}\n"), json!({"equal": eq})))
        }
        IdealCmd::Gb { stmts, order, reversed } => {
            let s = parse_all(&stmts.stmts)?;
            let sv = ctx.states(&s)?;
            let ord = match order {
                OrderArg::Lex => MonomialOrder::Lex,
                OrderArg::Grevlex => MonomialOrder::GrevLex,
            };
            let ring = prob_ring_with(&sv, ord, *reversed);
            let i = sum_ci_ideals_in(&s, &sv, ring.clone())?;
            let gb = i.default_basis(&budget)?;
            let polys: Vec<String> = gb.iter().map(|g| ring.format(g)).collect();
            Ok((
                lines(&polys),
                json!({"variables": ring.variables(), "order": ring.order().name(), "basis": polys}),
            ))
        }
    }
}

fn run(cli: &Cli) -> Result<(String, Value, Format), Failure> {
    let ctx = Ctx { n: cli.n, states: cli.states.clone(), budget_secs: cli.budget_secs };
    let mut format = cli.format;
    let (text, j) = match &cli.cmd {
        Cmd::Imsets(c) => imsets(&ctx, c)?,
        Cmd::Toric(c) => toric(&ctx, c)?,
        Cmd::Cone(c) => cone(&ctx, c, &mut format)?,
        Cmd::Ideal(c) => ideal(&ctx, c)?,
        Cmd::Verify(VerifyCmd::Relations { file }) => {
            let n = ctx.n()?;
            let s = verify::verify_file(file, n)?;
            (verify::render_text(&s), serde_json::to_value(&s).expect("serializable"))
        }
        Cmd::Report(r) => {
            if r.json {
                format = Format::Json;
            }
            let name = match r.table {
                Table::Table1 => "table1",
                Table::Table2 => "table2",
                Table::Table3 => "table3",
            };
            let rep = reports::table_report(name, ctx.budget_secs)?;
            (reports::render_text(&rep), serde_json::to_value(&rep).expect("serializable"))
        }
    };
    Ok((text, j, format))
}

fn emit(out: &Option<PathBuf>, body: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, j, format)) => {
            let body = match format {
                Format::Text => text,
                Format::Json => serde_json::to_string_pretty(&j).expect("serializable") + "\n",
            };
            if let Err(e) = emit(&cli.out, &body) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            if let Error::Budget { stage, secs } = &e {
                let marker = match cli.format {
                    Format::Text => format!("PARTIAL: budget of {secs:.1}s exceeded during {stage}\n"),
                    Format::Json => json!({"partial": true, "stage": stage, "budget_secs": secs}).to_string() + "\n",
                };
                let _ = emit(&cli.out, &marker);
                return ExitCode::from(3);
            }
            ExitCode::from(1)
        }
    }
}
