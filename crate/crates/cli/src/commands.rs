//! Argument parsing and command dispatch.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use dercat_core::catalog::{random_category, random_functor, small_pool};
use dercat_core::correspondence::{
    check_cartesian, check_cocartesian, check_flat_over_triangle, classify_cartesian, classify_cocartesian, grothendieck_cart,
    grothendieck_chain, grothendieck_cocart,
};
use dercat_core::derived::{
    check_absolute, derive_adjoint_family, derive_adjoint_pair, derive_family, derive_pair_composition, find_right_adjoint, left_derived,
    right_derived, right_derived_via_cartesian, right_kan_extension, DeriveOptions, DerivedResult, FamilyResult,
};
use dercat_core::functor::all_functors;
use dercat_core::localization::{
    check_left_fractions, check_right_fractions, deligne_comparison, localize_correspondence, localize_fractions, localize_left_fractions,
    localize_zigzag, marking_from_fibers, LocalizationResult, Route,
};
use dercat_core::{localize, saturate_marking, CorrespondenceError, DerivedError, FinCat, FunctorData, LocalizationError, Marking, Mor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::dot::{export_dot, Entity};
use crate::dsl::Decl;
use crate::report::{
    category_json, certificates_json, convergence_of, correspondence_json, functor_json, lifts_json, marking_json, method_name, nat_json,
    Convergence, Report, Status,
};
use crate::workspace::{describe_category, describe_functor, describe_marking, parse_workspace, Workspace, DEFAULT_BUDGET};

#[derive(Parser, Debug)]
#[command(name = "dercat", version, about = "Localization and derived functors of finite categories")]
pub struct Cli {
    /// Workspace source file (repeatable).
    #[arg(long = "ws", global = true, value_name = "FILE")]
    pub workspace: Vec<PathBuf>,
    /// Morphism budget for compiling presentations.
    #[arg(long, global = true, env = "DERCAT_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Zig-zag depth for localizations without fractions.
    #[arg(long, global = true, default_value_t = dercat_core::localization::DEFAULT_ZIGZAG_DEPTH)]
    pub depth: usize,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Structured)]
    pub format: Format,
    /// Also write a DOT rendering of the command's main entity.
    #[arg(long, global = true, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Fractions,
    LeftFractions,
    Zigzag,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate the workspace.
    Validate,
    /// Localize a category at a marking.
    Localize {
        category: String,
        #[arg(long = "w")]
        marking: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Grothendieck construction of a functor.
    Grothendieck {
        functor: String,
        /// The cartesian construction instead of the cocartesian one.
        #[arg(long)]
        cart: bool,
    },
    DeriveLeft {
        functor: String,
        #[arg(long)]
        wc: Option<String>,
        #[arg(long)]
        wd: Option<String>,
    },
    DeriveRight {
        functor: String,
        #[arg(long)]
        wc: Option<String>,
        #[arg(long)]
        wd: Option<String>,
    },
    /// Derived adjunction of `left ⊣ right`; the right adjoint is searched
    /// for when omitted.
    Adjoint {
        left: String,
        right: Option<String>,
        #[arg(long)]
        wc: Option<String>,
        #[arg(long)]
        wd: Option<String>,
    },
    /// Right Kan extension of a functor along another with the same source.
    Kan {
        functor: String,
        #[arg(long)]
        along: String,
        /// Also test absoluteness against functors into small categories.
        #[arg(long)]
        absolute: bool,
    },
    /// Deligne correspondence and its comparison functor.
    Deligne {
        functor: String,
        #[arg(long)]
        wc: Option<String>,
        #[arg(long)]
        wd: Option<String>,
    },
    /// Derived functors of a composable pair and of its composite.
    Compose {
        first: String,
        second: String,
        #[arg(long)]
        w0: Option<String>,
        #[arg(long)]
        w1: Option<String>,
        #[arg(long)]
        w2: Option<String>,
    },
    /// Flatness of the construction of a composable pair, before and after
    /// localization.
    Flat {
        first: String,
        second: String,
        #[arg(long)]
        w0: Option<String>,
        #[arg(long)]
        w1: Option<String>,
        #[arg(long)]
        w2: Option<String>,
    },
    /// Derived functors of a family over a base category.
    Family {
        name: String,
        /// Also derive an adjunction per arrow.
        #[arg(long)]
        adjoint: bool,
    },
    /// Seeded search for a functor with a right Kan extension along the
    /// localization but no left derived functor.
    Separate {
        #[arg(long, default_value_t = 2000)]
        attempts: usize,
        #[arg(long, default_value_t = 5)]
        max_morphisms: usize,
    },
    /// DOT rendering of a category, or of the construction of a functor.
    ExportDot {
        name: String,
        #[arg(long = "w")]
        marking: Option<String>,
    },
}

/// What a run produced.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
    /// DOT text to write, with its destination.
    pub dot: Option<(PathBuf, String)>,
}

/// Command text without file-valued flags.
fn echo(args: &[String]) -> String {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--ws" || a == "--dot" {
            skip = true;
            continue;
        }
        if a.starts_with("--ws=") || a.starts_with("--dot=") {
            continue;
        }
        out.push(a.as_str());
    }
    out.join(" ")
}

struct Ctx<'a> {
    ws: &'a Workspace,
    opts: DeriveOptions,
    seed: u64,
    command: String,
    dot: Option<String>,
}

type CmdResult = Result<Report, Report>;

impl Ctx<'_> {
    fn report(&self, status: Status) -> Report {
        Report::new(self.command.clone(), status)
    }

    fn error(&self, message: impl Into<String>) -> Report {
        self.report(Status::Error).with_message(message)
    }

    fn negative(&self, message: impl Into<String>) -> Report {
        self.report(Status::FailsCocartesian).with_message(message)
    }

    fn derived_error(&self, e: DerivedError) -> Report {
        match e {
            DerivedError::NotCertified(m) => self.report(Status::NotCertified).with_message(m),
            e @ (DerivedError::NotPreserving(_)
            | DerivedError::DerivedMissing(_)
            | DerivedError::NotAdjoint
            | DerivedError::BulletFailed(_)
            | DerivedError::HypothesisFailed(_)
            | DerivedError::Localization(LocalizationError::NoFractions)) => self.negative(e.to_string()),
            e => self.error(e.to_string()),
        }
    }

    fn localization_error(&self, e: LocalizationError) -> Report {
        match e {
            LocalizationError::NotConverged { .. } => self.report(Status::NotCertified).with_message(e.to_string()),
            LocalizationError::NoFractions => self.negative(e.to_string()),
            e => self.error(e.to_string()),
        }
    }

    fn marking(&self, name: Option<&str>, category: &str) -> Result<Marking, Report> {
        self.ws.marking_on(name, category).map_err(|m| self.error(m))
    }

    fn functor(&self, name: &str) -> Result<&crate::workspace::FunctorEntry, Report> {
        self.ws.functor(name).map_err(|m| self.error(m))
    }

    /// How each marking would be localized on its own.
    fn fiber_convergence(&self, pairs: &[(&str, &Marking)]) -> Vec<Convergence> {
        pairs
            .iter()
            .map(|(subject, w)| match localize(w, self.opts.depth) {
                Ok(r) => convergence_of(subject, &r),
                Err(_) => Convergence { subject: subject.to_string(), method: "zigzag".into(), depth: Some(self.opts.depth), converged: false },
            })
            .collect()
    }
}

fn validate(cx: &Ctx) -> CmdResult {
    let ws = cx.ws;
    let mut r = cx.report(Status::Ok);
    let cats: Vec<Value> = ws
        .categories
        .iter()
        .map(|(n, e)| json!({ "name": n, "objects": e.cat.num_objects(), "morphisms": e.cat.num_morphisms(), "generators": e.generators.len() }))
        .collect();
    let markings: Vec<Value> =
        ws.markings.iter().map(|(n, e)| json!({ "name": n, "category": e.category, "non_isos": marking_json(&e.marking) })).collect();
    let functors: Vec<Value> = ws.functors.iter().map(|(n, e)| json!({ "name": n, "source": e.source, "target": e.target })).collect();
    let families: Vec<Value> =
        ws.families.iter().map(|(n, e)| json!({ "name": n, "base": e.base, "fibers": e.data.fibers.len() })).collect();
    r.set("categories", cats);
    r.set("markings", markings);
    r.set("functors", functors);
    r.set("families", families);
    Ok(r)
}

fn localize_cmd(cx: &mut Ctx, category: &str, marking: &str, method: MethodArg) -> CmdResult {
    let w = cx.marking(Some(marking), category)?;
    cx.ws.category(category).map_err(|m| cx.error(m))?;
    let right = check_right_fractions(&w).is_empty();
    let left = check_left_fractions(&w).is_empty();
    let depth = cx.opts.depth;
    let result: Result<LocalizationResult, Report> = match method {
        MethodArg::Auto => localize(&w, depth).map_err(|e| cx.localization_error(e)),
        MethodArg::Fractions => localize_fractions(&w).map_err(|e| cx.localization_error(e)),
        MethodArg::LeftFractions => localize_left_fractions(&w).map_err(|e| cx.localization_error(e)),
        MethodArg::Zigzag => {
            let run = localize_zigzag(&w, depth);
            run.result.ok_or_else(|| {
                let mut r = cx.report(Status::NotCertified).with_message(format!("zig-zag closure did not converge at depth {depth}"));
                r.convergence.push(Convergence { subject: category.into(), method: "zigzag".into(), depth: Some(depth), converged: false });
                r.set("previous_classes", run.previous_classes.map_or(Value::Null, Value::from));
                r.set("classes", run.classes.map_or(Value::Null, Value::from));
                r
            })
        }
    };
    let mut attach = |mut r: Report| {
        r.set("right_fractions", right);
        r.set("left_fractions", left);
        r
    };
    let l = result.map_err(&mut attach)?;
    let mut r = attach(cx.report(Status::Ok));
    r.convergence.push(convergence_of(category, &l));
    r.set("method", method_name(l.method()));
    r.set("localized", category_json(l.localized(), true));
    r.set("q", functor_json(l.q()));
    r.set("certificates", certificates_json(&l));
    cx.dot = Some(export_dot(&Entity::Category { name: &format!("{category}[{marking}^-1]"), cat: l.localized(), edges: None, marking: None }));
    Ok(r)
}

fn grothendieck_cmd(cx: &mut Ctx, name: &str, cart: bool) -> CmdResult {
    let f = &cx.functor(name)?.functor;
    let mut r = cx.report(Status::Ok);
    let (x, lifts, classifying) = if cart {
        let x = grothendieck_cart(f);
        let w = check_cartesian(&x).map_err(|e| cx.error(e.to_string()))?;
        let g = classify_cartesian(&x, &w);
        (x, w.lifts.concat(), g)
    } else {
        let x = grothendieck_cocart(f);
        let w = check_cocartesian(&x).map_err(|e| cx.error(e.to_string()))?;
        let g = classify_cocartesian(&x, &w);
        (x, w.lifts.concat(), g)
    };
    r.set("construction", if cart { "cartesian" } else { "cocartesian" });
    r.set("correspondence", correspondence_json(&x));
    r.set("lifts", lifts_json(&x, &lifts));
    r.set("classifying", functor_json(&classifying));
    cx.dot = Some(export_dot(&Entity::Correspondence { name, correspondence: &x, marking: None }));
    Ok(r)
}

fn route_name(route: Route) -> String {
    match route {
        Route::Coend => "coend".into(),
        Route::Glued => "glued".into(),
        Route::Total(m) => format!("total_{}", method_name(m)),
    }
}

fn derived_body(r: &mut Report, d: &DerivedResult) {
    r.set("route", route_name(d.localized.route));
    r.set("localized_source", category_json(d.q_c.target(), false));
    r.set("localized_target", category_json(d.q_d.target(), false));
    if let Some(g) = &d.derived {
        r.set("derived", functor_json(g));
    }
    if let Some(t) = &d.theta {
        r.set("theta", nat_json(t));
    }
    r.set("lifts", lifts_json(&d.localized.correspondence, &d.lifts));
}

fn missing_witness(e: CorrespondenceError) -> (String, String) {
    match &e {
        CorrespondenceError::NotCocartesian { object, .. } | CorrespondenceError::NotCartesian { object, .. } => {
            (object.clone(), format!("localized {e}"))
        }
        other => (String::new(), other.to_string()),
    }
}

fn derive_cmd(cx: &mut Ctx, name: &str, wc: Option<&str>, wd: Option<&str>, right: bool) -> CmdResult {
    let entry = cx.functor(name)?;
    let (w_c, w_d) = (cx.marking(wc, &entry.source)?, cx.marking(wd, &entry.target)?);
    let f = &entry.functor;
    let convergence = cx.fiber_convergence(&[(&entry.source, &w_c), (&entry.target, &w_d)]);
    let d = if right { right_derived(f, &w_c, &w_d, cx.opts) } else { left_derived(f, &w_c, &w_d, cx.opts) };
    let d = d.map_err(|e| {
        let mut r = cx.derived_error(e);
        r.convergence = convergence.clone();
        r
    })?;
    let mut r = if d.derived.is_some() {
        let mut r = cx.report(Status::Ok);
        r.set("theta_direction", if right { "q_D.f => R.q_C" } else { "L.q_C => q_D.f" });
        r
    } else {
        let witness = if right {
            right_derived_via_cartesian(f, &w_c, &w_d, cx.opts)
                .ok()
                .and_then(|v| check_cartesian(&v.localized.correspondence).err())
        } else {
            check_cocartesian(&d.localized.correspondence).err()
        };
        let (object, message) = witness.map(missing_witness).unwrap_or_default();
        let mut r = cx.negative(message);
        r.set("witness", object);
        r
    };
    r.convergence = convergence;
    derived_body(&mut r, &d);
    cx.dot = Some(export_dot(&Entity::Correspondence { name, correspondence: &d.localized.correspondence, marking: None }));
    Ok(r)
}

fn adjoint_cmd(cx: &Ctx, left: &str, right: Option<&str>, wc: Option<&str>, wd: Option<&str>) -> CmdResult {
    let entry = cx.functor(left)?;
    let f = &entry.functor;
    let g = match right {
        Some(name) => {
            let e = cx.functor(name)?;
            if e.source != entry.target || e.target != entry.source {
                return Err(cx.error(format!("{name} does not go from {} to {}", entry.target, entry.source)));
            }
            e.functor.clone()
        }
        None => find_right_adjoint(f).map(|(g, _)| g).ok_or_else(|| cx.negative(format!("{left} has no right adjoint")))?,
    };
    let (w_c, w_d) = (cx.marking(wc, &entry.source)?, cx.marking(wd, &entry.target)?);
    let pair = derive_adjoint_pair(f, &g, &w_c, &w_d, cx.opts).map_err(|e| cx.derived_error(e))?;
    let mut r = cx.report(Status::Ok);
    r.convergence = cx.fiber_convergence(&[(&entry.source, &w_c), (&entry.target, &w_d)]);
    if right.is_none() {
        r.set("right_adjoint", functor_json(&g));
    }
    r.set("left", functor_json(&pair.left));
    r.set("right", functor_json(&pair.right));
    r.set("unit", nat_json(&pair.witness.unit));
    r.set("counit", nat_json(&pair.witness.counit));
    r.set("triangles", pair.witness.triangles_hold(&pair.left, &pair.right));
    Ok(r)
}

/// Functors out of `c` into the small test categories.
fn test_functors(c: &Arc<FinCat>) -> Vec<FunctorData> {
    small_pool(6).into_iter().flat_map(|t| all_functors(c, &Arc::new(t))).collect()
}

fn kan_cmd(cx: &Ctx, name: &str, along: &str, absolute: bool) -> CmdResult {
    let (fe, qe) = (cx.functor(name)?, cx.functor(along)?);
    if fe.source != qe.source {
        return Err(cx.error(format!("{name} and {along} have different sources")));
    }
    let Some((ext, theta)) = right_kan_extension(&fe.functor, &qe.functor) else {
        return Err(cx.negative(format!("{name} has no right Kan extension along {along}")));
    };
    let mut r = cx.report(Status::Ok);
    r.set("extension", functor_json(&ext));
    r.set("theta", nat_json(&theta));
    if absolute {
        let tests = test_functors(fe.functor.target());
        let ok = check_absolute(&ext, &theta, &qe.functor, &fe.functor, &tests);
        r.set("absolute", ok);
        r.set("absolute_tests", tests.len());
        if !ok {
            r.status = Status::FailsCocartesian;
            r.message = Some("extension is not absolute".into());
        }
    }
    Ok(r)
}

fn deligne_cmd(cx: &Ctx, name: &str, wc: Option<&str>, wd: Option<&str>) -> CmdResult {
    let entry = cx.functor(name)?;
    let (w_c, w_d) = (cx.marking(wc, &entry.source)?, cx.marking(wd, &entry.target)?);
    let cmp = deligne_comparison(&entry.functor, &w_c, &w_d, cx.opts.depth).map_err(|e| cx.localization_error(e))?;
    let mut r = if cmp.fully_faithful { cx.report(Status::Ok) } else { cx.negative("comparison functor is not fully faithful") };
    r.convergence = cx.fiber_convergence(&[(&entry.source, &w_c), (&entry.target, &w_d)]);
    r.set("deligne", correspondence_json(&cmp.deligne.correspondence));
    r.set("comparison", functor_json(&cmp.functor));
    r.set("fully_faithful", cmp.fully_faithful);
    Ok(r)
}

struct Pair<'a> {
    f: &'a FunctorData,
    g: &'a FunctorData,
    markings: [Marking; 3],
    names: [&'a str; 3],
}

fn pair<'a>(cx: &'a Ctx, first: &str, second: &str, ws: [Option<&str>; 3]) -> Result<Pair<'a>, Report> {
    let (fe, ge) = (cx.functor(first)?, cx.functor(second)?);
    if fe.target != ge.source {
        return Err(cx.error(format!("{first} and {second} are not composable")));
    }
    let names = [fe.source.as_str(), fe.target.as_str(), ge.target.as_str()];
    let markings = [cx.marking(ws[0], names[0])?, cx.marking(ws[1], names[1])?, cx.marking(ws[2], names[2])?];
    Ok(Pair { f: &fe.functor, g: &ge.functor, markings, names })
}

fn derived_summary(d: &DerivedResult) -> Value {
    match &d.derived {
        Some(g) => json!({ "exists": true, "derived": functor_json(g) }),
        None => json!({ "exists": false }),
    }
}

fn compose_cmd(cx: &Ctx, first: &str, second: &str, ws: [Option<&str>; 3]) -> CmdResult {
    let p = pair(cx, first, second, ws)?;
    let [w0, w1, w2] = &p.markings;
    let rep = derive_pair_composition(p.f, p.g, [w0, w1, w2], cx.opts).map_err(|e| cx.derived_error(e))?;
    let good = rep.flat_after && rep.composite_agrees != Some(false);
    let mut r = if good { cx.report(Status::Ok) } else { cx.negative("composite of derived functors is not the derived composite") };
    r.convergence = cx.fiber_convergence(&[(p.names[0], w0), (p.names[1], w1), (p.names[2], w2)]);
    r.set("flat_before", rep.flat_before);
    r.set("flat_after", rep.flat_after);
    r.set("comparison_is_equivalence", rep.comparison_is_equivalence);
    r.set("composite_agrees", rep.composite_agrees.map_or(Value::Null, Value::from));
    r.set("left_first", derived_summary(&rep.left_f));
    r.set("left_second", derived_summary(&rep.left_g));
    r.set("left_composite", derived_summary(&rep.left_gf));
    Ok(r)
}

fn flat_cmd(cx: &Ctx, first: &str, second: &str, ws: [Option<&str>; 3]) -> CmdResult {
    let p = pair(cx, first, second, ws)?;
    let x = grothendieck_chain(&[p.f.clone(), p.g.clone()]).map_err(|e| cx.error(e.to_string()))?;
    let before = check_flat_over_triangle(&x).map_err(|e| cx.error(e.to_string()))?;
    let w = marking_from_fibers(&x, &p.markings);
    let localized = localize_correspondence(&x, &w, cx.opts.depth).map_err(|e| cx.localization_error(e))?;
    let after = check_flat_over_triangle(&localized.correspondence).map_err(|e| cx.error(e.to_string()))?;
    let mut r = if after { cx.report(Status::Ok) } else { cx.negative("localized construction is not flat") };
    let [w0, w1, w2] = &p.markings;
    r.convergence = cx.fiber_convergence(&[(p.names[0], w0), (p.names[1], w1), (p.names[2], w2)]);
    r.set("flat_before", before);
    r.set("flat_after", after);
    r.set("route", route_name(localized.route));
    Ok(r)
}

fn family_body(r: &mut Report, fam: &FamilyResult) {
    let b = &fam.base;
    let name = |m: Mor| b.morphism_name(m).to_string();
    let derived: Vec<Value> =
        b.morphisms().filter(|&m| !b.is_identity(m)).map(|m| json!([name(m), functor_json(&fam.derived[m])])).collect();
    let triangles: Vec<Value> = fam
        .triangles
        .iter()
        .map(|t| json!({ "first": name(t.alpha), "second": name(t.beta), "iso": nat_json(&t.iso) }))
        .collect();
    r.set("derived", derived);
    r.set("triangles", triangles);
    let adjunctions: Vec<Value> = b
        .morphisms()
        .filter_map(|m| fam.adjunctions[m].as_ref().map(|a| json!([name(m), { "right": functor_json(&a.right), "unit": nat_json(&a.witness.unit), "counit": nat_json(&a.witness.counit) }])))
        .collect();
    if !adjunctions.is_empty() {
        r.set("adjunctions", adjunctions);
    }
}

fn family_cmd(cx: &Ctx, name: &str, adjoint: bool) -> CmdResult {
    let entry = cx.ws.family(name).map_err(|m| cx.error(m))?;
    let fam = if adjoint { derive_adjoint_family(&entry.data, cx.opts) } else { derive_family(&entry.data, cx.opts) };
    let fam = fam.map_err(|e| cx.derived_error(e))?;
    let mut r = cx.report(Status::Ok);
    r.convergence = fam.localized.iter().zip(fam.base.objects()).map(|(l, x)| convergence_of(fam.base.object_name(x), l)).collect();
    family_body(&mut r, &fam);
    Ok(r)
}

fn random_marking(rng: &mut ChaCha8Rng, c: &Arc<FinCat>, p: f64) -> Marking {
    let gens: Vec<Mor> = c.morphisms().filter(|m| !c.is_identity(*m) && rng.gen_bool(p)).collect();
    saturate_marking(c.clone(), gens)
}

fn separate_cmd(cx: &Ctx, attempts: usize, max_morphisms: usize) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cx.seed);
    for attempt in 1..=attempts {
        let c = Arc::new(random_category(&mut rng, max_morphisms));
        let d = Arc::new(random_category(&mut rng, max_morphisms));
        let Some(f) = random_functor(&mut rng, &c, &d) else { continue };
        let (w_c, w_d) = (random_marking(&mut rng, &c, 0.4), random_marking(&mut rng, &d, 0.3));
        let Ok(l) = left_derived(&f, &w_c, &w_d, cx.opts) else { continue };
        if l.derived.is_some() {
            continue;
        }
        let Some((ext, _)) = right_kan_extension(&f.then(&l.q_d).expect("composable"), &l.q_c) else { continue };
        let decls = vec![
            Decl::Category(describe_category("C", &c)),
            Decl::Category(describe_category("D", &d)),
            Decl::Marking(describe_marking("W", "C", &w_c)),
            Decl::Marking(describe_marking("V", "D", &w_d)),
            Decl::Functor(describe_functor("F", ("C", "D"), &f)),
        ];
        let (object, _) = check_cocartesian(&l.localized.correspondence).err().map(missing_witness).unwrap_or_default();
        let mut r = cx.report(Status::Ok);
        r.set("attempt", attempt);
        r.set("source", crate::dsl::to_source(&decls));
        r.set("witness", object);
        r.set("kan_extension", functor_json(&ext));
        return Ok(r);
    }
    Err(cx.negative(format!("no separating instance within {attempts} attempts")))
}

fn export_dot_cmd(cx: &Ctx, name: &str, marking: Option<&str>) -> Result<String, Report> {
    if let Ok(entry) = cx.ws.category(name) {
        let w = match marking {
            Some(m) => Some(cx.marking(Some(m), name)?),
            None => None,
        };
        let edges = entry.generator_morphisms();
        return Ok(export_dot(&Entity::Category { name, cat: &entry.cat, edges: Some(&edges), marking: w.as_ref() }));
    }
    if let Ok(entry) = cx.ws.functor(name) {
        let x = grothendieck_cocart(&entry.functor);
        let w = match marking {
            Some(m) => {
                let w_c = cx.marking(Some(m), &entry.source)?;
                Some(marking_from_fibers(&x, &[w_c, Marking::isos(entry.functor.target().clone())]))
            }
            None => None,
        };
        return Ok(export_dot(&Entity::Correspondence { name, correspondence: &x, marking: w.as_ref() }));
    }
    Err(cx.error(format!("no category or functor named {name}")))
}

fn read_sources(paths: &[PathBuf]) -> Result<Vec<(String, String)>, String> {
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let name = p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned());
            Ok((name, text))
        })
        .collect()
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Structured => report.to_json(),
        Format::Text => report.to_text(),
    }
}

/// Runs one command line (without the program name).
pub fn run(args: &[String]) -> Outcome {
    let argv = std::iter::once("dercat".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                return Outcome { stdout: e.to_string(), exit_code: 0, dot: None };
            }
            let message = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let report = Report::new(echo(args), Status::Error).with_message(message);
            return Outcome { stdout: report.to_json(), exit_code: 2, dot: None };
        }
    };
    let command = echo(args);
    let fail = |message: String| {
        let report = Report::new(command.clone(), Status::Error).with_message(message);
        Outcome { stdout: render(&report, cli.format), exit_code: 2, dot: None }
    };
    let sources = match read_sources(&cli.workspace) {
        Ok(s) => s,
        Err(m) => return fail(m),
    };
    let ws = match parse_workspace(&sources, cli.budget) {
        Ok(ws) => ws,
        Err(e) => return fail(e.to_string()),
    };
    let mut cx = Ctx { ws: &ws, opts: DeriveOptions { depth: cli.depth }, seed: cli.seed, command: command.clone(), dot: None };
    let report = match &cli.command {
        Command::Validate => validate(&cx),
        Command::Localize { category, marking, method } => localize_cmd(&mut cx, category, marking, *method),
        Command::Grothendieck { functor, cart } => grothendieck_cmd(&mut cx, functor, *cart),
        Command::DeriveLeft { functor, wc, wd } => derive_cmd(&mut cx, functor, wc.as_deref(), wd.as_deref(), false),
        Command::DeriveRight { functor, wc, wd } => derive_cmd(&mut cx, functor, wc.as_deref(), wd.as_deref(), true),
        Command::Adjoint { left, right, wc, wd } => adjoint_cmd(&cx, left, right.as_deref(), wc.as_deref(), wd.as_deref()),
        Command::Kan { functor, along, absolute } => kan_cmd(&cx, functor, along, *absolute),
        Command::Deligne { functor, wc, wd } => deligne_cmd(&cx, functor, wc.as_deref(), wd.as_deref()),
        Command::Compose { first, second, w0, w1, w2 } => compose_cmd(&cx, first, second, [w0.as_deref(), w1.as_deref(), w2.as_deref()]),
        Command::Flat { first, second, w0, w1, w2 } => flat_cmd(&cx, first, second, [w0.as_deref(), w1.as_deref(), w2.as_deref()]),
        Command::Family { name, adjoint } => family_cmd(&cx, name, *adjoint),
        Command::Separate { attempts, max_morphisms } => separate_cmd(&cx, *attempts, *max_morphisms),
        Command::ExportDot { name, marking } => {
            return match export_dot_cmd(&cx, name, marking.as_deref()) {
                Ok(text) => Outcome { stdout: text, exit_code: 0, dot: None },
                Err(r) => Outcome { stdout: render(&r, cli.format), exit_code: r.status.exit_code(), dot: None },
            };
        }
    };
    let report = report.unwrap_or_else(|r| r);
    let dot = cli.dot.clone().zip(cx.dot.take());
    Outcome { stdout: render(&report, cli.format), exit_code: report.status.exit_code(), dot }
}
