//! `dbr`: command-line access to double Burnside rings and their ghost algebras.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use dbr_core::acceptance::{cocycle_on, diagram_on, run_all};
use dbr_core::burnside::{alpha, mackey_product, marks, standard_basis, BisetElement};
use dbr_core::cyclic::{decomposition_check, CyclicFamily};
use dbr_core::ghost::{
    alpha_multiplicative, condensation_check, ghost_product, rho_multiplicative, twisted_product,
};
use dbr_core::group::{configured_max_order, FiniteGroup};
use dbr_core::json::{biset_to_json, element_from_json, ghost_to_json, Element};
use dbr_core::linalg;
use dbr_core::par::Exec;
use dbr_core::rational::{format_q, Q};
use dbr_core::report::Report;
use dbr_core::space::{ProductSpace, Universe};

mod output;

use output::{emit, Failure};

#[derive(Parser)]
#[command(
    name = "dbr",
    version,
    about = "Exact computations in double Burnside rings and ghost algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Group name: C<n>, D<2n>, S<n>, or products such as C2xS3.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Second group, for B(G, H). Defaults depend on the command.
    #[arg(long, global = true)]
    right: Option<String>,
    /// Comma-separated orders of a family of cyclic groups.
    #[arg(long, global = true, value_delimiter = ',')]
    family: Vec<u64>,
    /// Group given by a Cayley table file; its name is the file stem.
    #[arg(long, global = true)]
    cayley_file: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest group order whose subgroups are enumerated.
    #[arg(long, global = true)]
    max_order: Option<usize>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Basic data of a group.
    Group,
    /// The subgroups of a group, sorted, with conjugacy classes.
    Subgroups,
    /// Table of marks of B(G, H) (H defaults to the trivial group).
    Marks,
    /// The map alpha on the standard basis of B(G, H), with its determinant.
    Alpha,
    /// Product of two biset elements read from JSON files.
    MackeyMul { first: PathBuf, second: PathBuf },
    /// Product of two ghost elements read from JSON files.
    GhostMul {
        first: PathBuf,
        second: PathBuf,
        /// Use the untwisted-basis product *κ instead of ~*κ.
        #[arg(long)]
        kappa: bool,
    },
    /// zeta alpha = rho and multiplicativity of alpha and rho on B(G, G).
    VerifyDiagram,
    /// The 2-cocycle relation for kappa on subgroups of G x G.
    VerifyCocycle {
        /// Random triples to test instead of all of them.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Condensation of the ghost algebra by e_G and e_H.
    Condense,
    /// Images of the standard basis under the matrix decomposition.
    CyclicDecompose {
        /// Also check that the decomposition is bijective and multiplicative.
        #[arg(long)]
        verify: bool,
    },
    /// Runs the acceptance suite.
    Accept,
}

struct Ctx {
    opts: Opts,
    universe: Universe,
    exec: Exec,
}

impl Ctx {
    fn new(opts: Opts) -> Result<Self, Failure> {
        let bound = opts.max_order.unwrap_or_else(configured_max_order);
        let universe = Universe::with_bound(bound);
        if let Some(path) = &opts.cayley_file {
            let g = FiniteGroup::from_cayley_file(path)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            universe.insert_group(g).map_err(Failure::input)?;
        }
        let exec = match opts.jobs {
            Some(1) => Exec::Sequential,
            _ => Exec::Parallel,
        };
        #[cfg(feature = "parallel")]
        if let Some(n) = opts.jobs.filter(|&n| n > 1) {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::input(e.to_string()))?;
        }
        Ok(Ctx {
            opts,
            universe,
            exec,
        })
    }

    fn group(&self) -> Result<Arc<FiniteGroup>, Failure> {
        match (&self.opts.group, &self.opts.cayley_file) {
            (Some(_), Some(_)) => Err(Failure::input(
                "give either --group or --cayley-file, not both",
            )),
            (Some(name), None) => self.universe.group(name).map_err(Failure::input),
            (None, Some(path)) => {
                let stem = path.file_stem().unwrap_or_default().to_string_lossy();
                self.universe.group(&stem).map_err(Failure::input)
            }
            (None, None) => Err(Failure::input("missing --group or --cayley-file")),
        }
    }

    fn right_or(&self, default: &str) -> Result<Arc<FiniteGroup>, Failure> {
        let name = self.opts.right.as_deref().unwrap_or(default);
        self.universe.group(name).map_err(Failure::input)
    }

    fn space(
        &self,
        g: &Arc<FiniteGroup>,
        h: &Arc<FiniteGroup>,
    ) -> Result<Arc<ProductSpace>, Failure> {
        self.universe.space(g, h).map_err(Failure::input)
    }
}

/// Class representatives by increasing order.
fn ordered_reps(sp: &ProductSpace) -> Vec<usize> {
    let mut reps = sp.lattice().representatives();
    reps.sort_by_key(|&r| (sp.subgroup(r).order(), r));
    reps
}

fn subgroup_list(sp: &ProductSpace, reps: &[usize]) -> Vec<Value> {
    reps.iter()
        .map(|&r| json!(sp.subgroup(r).elements()))
        .collect()
}

fn cmd_group(ctx: &Ctx) -> Result<Value, Failure> {
    let g = ctx.group()?;
    let lat = g
        .subgroups_bounded(ctx.universe.bound())
        .map_err(Failure::input)?;
    let mut element_orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    element_orders.sort_unstable();
    element_orders.dedup();
    Ok(json!({
        "name": g.label(),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "exponent": g.exponent(),
        "element_orders": element_orders,
        "subgroups": lat.len(),
        "conjugacy_classes_of_subgroups": lat.classes().len(),
    }))
}

fn cmd_subgroups(ctx: &Ctx) -> Result<Value, Failure> {
    let g = ctx.group()?;
    let lat = g
        .subgroups_bounded(ctx.universe.bound())
        .map_err(Failure::input)?;
    let list: Vec<Value> = (0..lat.len())
        .map(|i| {
            let s = lat.get(i);
            json!({
                "index": i,
                "order": s.order(),
                "elements": s.elements(),
                "class": lat.class_of(i),
                "normal": lat.classes()[lat.class_of(i)].len() == 1,
                "normalizer_order": lat.normalizer_order(i),
            })
        })
        .collect();
    Ok(json!({ "group": g.label(), "subgroups": list }))
}

fn cmd_marks(ctx: &Ctx) -> Result<Value, Failure> {
    let (g, h) = (ctx.group()?, ctx.right_or("C1")?);
    let sp = ctx.space(&g, &h)?;
    let reps = ordered_reps(&sp);
    let rows: Vec<Vec<String>> = reps
        .iter()
        .map(|&r| {
            let m = marks(&BisetElement::basis(&sp, r));
            reps.iter().map(|&u| format_q(&m.coeff(u))).collect()
        })
        .collect();
    Ok(json!({
        "left": g.label(),
        "right": h.label(),
        "basis": subgroup_list(&sp, &reps),
        "marks": rows,
    }))
}

fn cmd_alpha(ctx: &Ctx) -> Result<Value, Failure> {
    let (g, h) = (ctx.group()?, ctx.right_or("C1")?);
    let sp = ctx.space(&g, &h)?;
    let lat = sp.lattice();
    let reps = ordered_reps(&sp);
    let mut images = Vec::new();
    let mut matrix: Vec<Vec<Q>> = Vec::new();
    for &r in &reps {
        let a = alpha(&BisetElement::basis(&sp, r));
        matrix.push(reps.iter().map(|&s| a.coeff(s)).collect());
        images.push(
            json!({ "subgroup": sp.subgroup(r).elements(), "image": ghost_to_json(&a)["terms"] }),
        );
    }
    let index: i64 = reps
        .iter()
        .map(|&r| (lat.normalizer_order(r) / lat.get(r).order()) as i64)
        .product();
    let det = linalg::determinant(&matrix);
    Ok(json!({
        "left": g.label(),
        "right": h.label(),
        "images": images,
        "determinant": format!("{}/{}", det.numer(), det.denom()),
        "index_product": index,
    }))
}

fn read_element(ctx: &Ctx, path: &Path) -> Result<Element, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    element_from_json(&ctx.universe, &v)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn cmd_mackey(ctx: &Ctx, left: &Path, right: &Path) -> Result<Value, Failure> {
    let (Element::Biset(a), Element::Biset(b)) =
        (read_element(ctx, left)?, read_element(ctx, right)?)
    else {
        return Err(Failure::input("mackey-mul expects two biset elements"));
    };
    let t = ctx
        .universe
        .triple(a.space().left(), a.space().right(), b.space().right())
        .map_err(Failure::input)?;
    let ab = mackey_product(&t, &a, &b).map_err(Failure::input)?;
    Ok(biset_to_json(&ab))
}

fn cmd_ghost(ctx: &Ctx, left: &Path, right: &Path, kappa: bool) -> Result<Value, Failure> {
    let (Element::Ghost(a), Element::Ghost(b)) =
        (read_element(ctx, left)?, read_element(ctx, right)?)
    else {
        return Err(Failure::input("ghost-mul expects two ghost elements"));
    };
    let t = ctx
        .universe
        .triple(a.space().left(), a.space().right(), b.space().right())
        .map_err(Failure::input)?;
    let ab = if kappa {
        twisted_product(&t, &a, &b).map_err(Failure::input)?
    } else {
        ghost_product(&t, &a, &b).map_err(Failure::check)?
    };
    Ok(ghost_to_json(&ab))
}

fn cmd_diagram(ctx: &Ctx) -> Result<(Value, Vec<Report>), Failure> {
    let g = ctx.group()?;
    let one = ctx.universe.group("C1").map_err(Failure::input)?;
    let mut diag = Report::new("zeta alpha = rho");
    for h in [&one, &g] {
        diagram_on(&mut diag, &ctx.space(&g, h)?);
    }
    let t = ctx.universe.cube(&g).map_err(Failure::input)?;
    t.fill_structure_constants(ctx.exec)
        .map_err(Failure::check)?;
    let basis = standard_basis(&t.gh);
    let n = basis.len();
    let results = ctx.exec.map_range(n * n, |i| {
        let (a, b) = (&basis[i / n], &basis[i % n]);
        (
            alpha_multiplicative(&t, a, b).ok(),
            rho_multiplicative(&t, a, b).ok(),
        )
    });
    let mut am = Report::new("alpha(ab) = alpha(a) *κ alpha(b)");
    let mut rm = Report::new("rho(ab) = rho(a) ~*κ rho(b)");
    for (i, (a, r)) in results.into_iter().enumerate() {
        let pair = || format!("basis pair ({}, {})", i / n, i % n);
        am.check(a == Some(true), pair);
        rm.check(r == Some(true), pair);
    }
    Ok((json!({ "group": g.label() }), vec![diag, am, rm]))
}

fn cmd_cocycle(ctx: &Ctx, samples: Option<usize>) -> Result<(Value, Vec<Report>), Failure> {
    let g = ctx.group()?;
    let t = ctx.universe.cube(&g).map_err(Failure::input)?;
    let n = t.gh.len();
    // exhaustive up to a million triples unless told otherwise
    let samples = samples.or((n * n * n > 1_000_000).then_some(10_000));
    let mut rep = cocycle_on(&t, samples, ctx.exec);
    rep.name = "kappa(L,M) kappa(L*M,N) = kappa(L,M*N) kappa(M,N) and (L*M)*N = L*(M*N)".into();
    Ok((
        json!({ "group": g.label(), "subgroups": n, "sampled": samples.is_some() }),
        vec![rep],
    ))
}

fn cmd_condense(ctx: &Ctx) -> Result<(Value, Vec<Report>), Failure> {
    let g = ctx.group()?;
    let h = match &ctx.opts.right {
        Some(_) => ctx.right_or("C1")?,
        None => g.clone(),
    };
    let c = condensation_check(&ctx.universe, &g, &h).map_err(Failure::input)?;
    let mut rep = Report::new("condensation by e_G and e_H");
    rep.checked = 1;
    for f in &c.failures {
        rep.fail(f.clone());
    }
    let v = json!({ "left": c.left, "right": c.right, "dimension": c.dimension });
    Ok((v, vec![rep]))
}

fn cmd_cyclic(ctx: &Ctx, verify: bool) -> Result<(Value, Vec<Report>), Failure> {
    if ctx.opts.family.is_empty() {
        return Err(Failure::input("missing --family"));
    }
    let fam = CyclicFamily::new(&ctx.opts.family).map_err(Failure::input)?;
    let v = fam.iso_chain(ctx.exec).to_json();
    let reports = if verify {
        vec![decomposition_check(&fam, ctx.exec)]
    } else {
        Vec::new()
    };
    Ok((v, reports))
}

fn cmd_accept(ctx: &Ctx) -> (Value, Vec<Report>, String) {
    let outcomes = run_all(ctx.exec);
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for o in &outcomes {
        text.push_str(&o.line());
        text.push('\n');
        let mut r = o.report.clone();
        r.name = format!("criterion {}: {}", o.id, o.title);
        if !o.within_budget() {
            r.fail(format!(
                "took {:.1} s, over budget",
                o.elapsed.as_secs_f64()
            ));
        }
        rows.push(json!({
            "id": o.id,
            "title": o.title,
            "passed": o.passed(),
            "checked": o.report.checked,
            "failed": o.report.failed,
            "failures": o.report.failures,
            "seconds": o.elapsed.as_secs_f64(),
            "budget_seconds": o.budget.map(|b| b.as_secs_f64()),
        }));
        reports.push(r);
    }
    (json!({ "criteria": rows }), reports, text)
}

fn run(cli: Cli) -> Result<(Value, Vec<Report>, Option<String>), Failure> {
    let cmd = cli.command;
    let ctx = Ctx::new(cli.opts)?;
    let plain = |v: Value| (v, Vec::new(), None);
    let checked = |(v, r): (Value, Vec<Report>)| (v, r, None);
    Ok(match &cmd {
        Command::Group => plain(cmd_group(&ctx)?),
        Command::Subgroups => plain(cmd_subgroups(&ctx)?),
        Command::Marks => plain(cmd_marks(&ctx)?),
        Command::Alpha => plain(cmd_alpha(&ctx)?),
        Command::MackeyMul { first, second } => plain(cmd_mackey(&ctx, first, second)?),
        Command::GhostMul {
            first,
            second,
            kappa,
        } => plain(cmd_ghost(&ctx, first, second, *kappa)?),
        Command::VerifyDiagram => checked(cmd_diagram(&ctx)?),
        Command::VerifyCocycle { samples } => checked(cmd_cocycle(&ctx, *samples)?),
        Command::Condense => checked(cmd_condense(&ctx)?),
        Command::CyclicDecompose { verify } => checked(cmd_cyclic(&ctx, *verify)?),
        Command::Accept => {
            let (v, r, t) = cmd_accept(&ctx);
            (v, r, Some(t))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.opts.json
        || matches!(
            cli.command,
            Command::CyclicDecompose { .. } | Command::MackeyMul { .. } | Command::GhostMul { .. }
        );
    match run(cli) {
        Ok((value, reports, text)) => emit(&value, &reports, text.as_deref(), json),
        Err(f) => f.exit(),
    }
}
