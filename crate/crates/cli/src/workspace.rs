//! Named categories, markings, functors and families compiled from source.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use dercat_core::derived::FamilyData;
use dercat_core::{compile_with_words, saturate_marking, FinCat, FunctorData, Generator, Marking, Mor, Obj, Path, Presentation};
use thiserror::Error;

use crate::dsl::{self, ArrowDecl, CategoryDecl, Decl, FamilyDecl, FiberDecl, FunctorDecl, MarkingDecl, PathExpr, Pos, SyntaxError};

pub const DEFAULT_BUDGET: usize = 256;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum WorkspaceError {
    #[error("{file}:{}: syntax error: {}", .error.pos, .error.message)]
    Syntax { file: String, error: SyntaxError },
    #[error("{file}:{pos}: {kind} {name}: {message}")]
    Semantic { file: String, pos: Pos, kind: &'static str, name: String, message: String },
}

#[derive(Clone, Debug)]
pub struct CategoryEntry {
    pub cat: Arc<FinCat>,
    /// Generator name and the morphism it denotes.
    pub generators: Vec<(String, Mor)>,
    /// Normal-form generator path of every morphism.
    pub words: Vec<Path>,
}

impl CategoryEntry {
    fn generator(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|(g, _)| g == name)
    }

    fn atom(&self, name: &str) -> Option<Mor> {
        if let Some(k) = self.generator(name) {
            return Some(self.generators[k].1);
        }
        if let Some(x) = name.strip_prefix("id_").and_then(|x| self.cat.find_object(x)) {
            return Some(self.cat.identity(x));
        }
        self.cat.find_morphism(name)
    }

    /// Evaluates a dotted path, outermost first.
    pub fn eval(&self, path: &[String]) -> Result<Mor, String> {
        let c = &self.cat;
        let mut acc: Option<Mor> = None;
        for part in path.iter().rev() {
            let m = self.atom(part).ok_or_else(|| format!("unknown morphism {part}"))?;
            acc = Some(match acc {
                None => m,
                Some(a) => c.try_compose(m, a).ok_or_else(|| format!("path {} is not composable", path.join(".")))?,
            });
        }
        acc.ok_or_else(|| "empty path".to_string())
    }

    pub fn generator_morphisms(&self) -> Vec<Mor> {
        let set: BTreeSet<Mor> = self.generators.iter().map(|&(_, m)| m).filter(|&m| !self.cat.is_identity(m)).collect();
        set.into_iter().collect()
    }
}

#[derive(Clone, Debug)]
pub struct MarkingEntry {
    pub category: String,
    pub marking: Marking,
}

#[derive(Clone, Debug)]
pub struct FunctorEntry {
    pub source: String,
    pub target: String,
    pub functor: FunctorData,
}

#[derive(Clone, Debug)]
pub struct FamilyEntry {
    pub base: String,
    pub data: FamilyData,
}

#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub decls: Vec<Decl>,
    pub categories: BTreeMap<String, CategoryEntry>,
    pub markings: BTreeMap<String, MarkingEntry>,
    pub functors: BTreeMap<String, FunctorEntry>,
    pub families: BTreeMap<String, FamilyEntry>,
}

/// Workspaces are equal when their declarations are.
impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        self.decls == other.decls
    }
}

struct Ctx<'a> {
    file: &'a str,
    kind: &'static str,
    name: &'a str,
    pos: Pos,
}

impl Ctx<'_> {
    fn err(&self, message: impl Into<String>) -> WorkspaceError {
        WorkspaceError::Semantic {
            file: self.file.to_string(),
            pos: self.pos,
            kind: self.kind,
            name: self.name.to_string(),
            message: message.into(),
        }
    }
}

fn check_unique<'a>(ctx: &Ctx, what: &str, names: impl IntoIterator<Item = &'a String>) -> Result<(), WorkspaceError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(ctx.err(format!("duplicate {what} {n}")));
        }
    }
    Ok(())
}

fn compile_category(ctx: &Ctx, d: &CategoryDecl, budget: usize) -> Result<CategoryEntry, WorkspaceError> {
    check_unique(ctx, "object", &d.objects)?;
    check_unique(ctx, "arrow", d.arrows.iter().map(|a| &a.name))?;
    let object = |x: &str| d.objects.iter().position(|o| o == x).ok_or_else(|| ctx.err(format!("unknown object {x}")));
    let mut generators = Vec::with_capacity(d.arrows.len());
    for a in &d.arrows {
        if a.name.starts_with("id_") {
            return Err(ctx.err(format!("arrow name {} is reserved for identities", a.name)));
        }
        generators.push(Generator { name: a.name.clone(), src: object(&a.src)?, tgt: object(&a.tgt)? });
    }
    let to_path = |p: &PathExpr| -> Result<Path, WorkspaceError> {
        let mut letters = Vec::new();
        let mut src = None;
        for part in p.iter().rev() {
            if let Some(k) = d.arrows.iter().position(|a| &a.name == part) {
                src.get_or_insert(generators[k].src);
                letters.push(k);
            } else if let Some(x) = part.strip_prefix("id_") {
                src.get_or_insert(object(x)?);
            } else {
                return Err(ctx.err(format!("unknown arrow {part}")));
            }
        }
        Ok(Path { src: src.expect("non-empty path"), letters })
    };
    let relations = d.relations.iter().map(|(l, r)| Ok((to_path(l)?, to_path(r)?))).collect::<Result<Vec<_>, WorkspaceError>>()?;
    let pres = Presentation::new(d.objects.clone(), generators, relations).map_err(|e| ctx.err(e.to_string()))?;
    let compiled = compile_with_words(&pres, budget).map_err(|e| ctx.err(e.to_string()))?;
    let report = compiled.category.validate();
    if !report.is_ok() {
        return Err(ctx.err(format!("not a category: {}", report.violations[0])));
    }
    let generators = d.arrows.iter().zip(compiled.generators).map(|(a, m)| (a.name.clone(), m)).collect();
    Ok(CategoryEntry { cat: Arc::new(compiled.category), generators, words: compiled.words })
}

/// Extends images of generators along normal-form words.
fn extend_along_words<T: Clone>(words: &[Path], identity: impl Fn(Obj) -> T, letters: &[T], mut then: impl FnMut(&T, &T) -> Result<T, String>) -> Result<Vec<T>, String> {
    words
        .iter()
        .map(|w| {
            let mut acc = identity(w.src);
            for &l in &w.letters {
                acc = then(&acc, &letters[l])?;
            }
            Ok(acc)
        })
        .collect()
}

fn compile_functor(ctx: &Ctx, d: &FunctorDecl, cats: &BTreeMap<String, CategoryEntry>) -> Result<FunctorEntry, WorkspaceError> {
    let lookup = |n: &str| cats.get(n).ok_or_else(|| ctx.err(format!("unknown category {n}")));
    let (src, tgt) = (lookup(&d.source)?, lookup(&d.target)?);
    let (c, e) = (&src.cat, &tgt.cat);
    check_unique(ctx, "object mapping for", d.objects.iter().map(|(a, _)| a))?;
    check_unique(ctx, "arrow mapping for", d.arrows.iter().map(|(u, _)| u))?;
    let mut obj_map = vec![None; c.num_objects()];
    for (a, x) in &d.objects {
        let a = c.find_object(a).ok_or_else(|| ctx.err(format!("unknown object {a} in {}", d.source)))?;
        obj_map[a] = Some(e.find_object(x).ok_or_else(|| ctx.err(format!("unknown object {x} in {}", d.target)))?);
    }
    let obj_map: Vec<Obj> = obj_map
        .into_iter()
        .enumerate()
        .map(|(a, y)| y.ok_or_else(|| ctx.err(format!("object {} is not mapped", c.object_name(a)))))
        .collect::<Result<_, _>>()?;
    let mut images = vec![None; src.generators.len()];
    for (u, p) in &d.arrows {
        let k = src.generator(u).ok_or_else(|| ctx.err(format!("unknown arrow {u} in {}", d.source)))?;
        images[k] = Some(tgt.eval(p).map_err(|m| ctx.err(m))?);
    }
    let images: Vec<Mor> = images
        .into_iter()
        .enumerate()
        .map(|(k, m)| m.ok_or_else(|| ctx.err(format!("arrow {} is not mapped", src.generators[k].0))))
        .collect::<Result<_, _>>()?;
    for ((name, g), &image) in src.generators.iter().zip(&images) {
        if e.src(image) != obj_map[c.src(*g)] {
            return Err(ctx.err(format!("not a functor: src mismatch at {name}")));
        }
        if e.tgt(image) != obj_map[c.tgt(*g)] {
            return Err(ctx.err(format!("not a functor: tgt mismatch at {name}")));
        }
    }
    let mor_map = extend_along_words(&src.words, |x| e.identity(obj_map[x]), &images, |&a, &g| Ok(e.compose(g, a)))
        .map_err(|m| ctx.err(m))?;
    for (k, (name, g)) in src.generators.iter().enumerate() {
        if mor_map[*g] != images[k] {
            return Err(ctx.err(format!("not a functor: relations identifying {name} are not preserved")));
        }
    }
    let functor = FunctorData::new(c.clone(), e.clone(), obj_map, mor_map).map_err(|err| ctx.err(err.to_string()))?;
    Ok(FunctorEntry { source: d.source.clone(), target: d.target.clone(), functor })
}

fn compile_family(ctx: &Ctx, d: &FamilyDecl, ws: &Workspace) -> Result<FamilyEntry, WorkspaceError> {
    let base = ws.categories.get(&d.base).ok_or_else(|| ctx.err(format!("unknown category {}", d.base)))?;
    let b = &base.cat;
    check_unique(ctx, "fiber for", d.fibers.iter().map(|f| &f.object))?;
    check_unique(ctx, "functor for", d.arrows.iter().map(|(u, _)| u))?;
    let mut fibers: Vec<Option<(String, Marking)>> = vec![None; b.num_objects()];
    for FiberDecl { object, category, marking } in &d.fibers {
        let x = b.find_object(object).ok_or_else(|| ctx.err(format!("unknown object {object} in {}", d.base)))?;
        let cat = ws.categories.get(category).ok_or_else(|| ctx.err(format!("unknown category {category}")))?;
        let w = match marking {
            None => Marking::isos(cat.cat.clone()),
            Some(w) => {
                let entry = ws.markings.get(w).ok_or_else(|| ctx.err(format!("unknown marking {w}")))?;
                if &entry.category != category {
                    return Err(ctx.err(format!("marking {w} is not on {category}")));
                }
                entry.marking.clone()
            }
        };
        fibers[x] = Some((category.clone(), w));
    }
    let fibers: Vec<(String, Marking)> = fibers
        .into_iter()
        .enumerate()
        .map(|(x, f)| f.ok_or_else(|| ctx.err(format!("object {} has no fiber", b.object_name(x)))))
        .collect::<Result<_, _>>()?;
    let mut images = vec![None; base.generators.len()];
    for (u, g) in &d.arrows {
        let k = base.generator(u).ok_or_else(|| ctx.err(format!("unknown arrow {u} in {}", d.base)))?;
        let entry = ws.functors.get(g).ok_or_else(|| ctx.err(format!("unknown functor {g}")))?;
        let (s, t) = (b.src(base.generators[k].1), b.tgt(base.generators[k].1));
        if entry.source != fibers[s].0 || entry.target != fibers[t].0 {
            return Err(ctx.err(format!("functor {g} does not go from the fiber over {} to the fiber over {}", b.object_name(s), b.object_name(t))));
        }
        images[k] = Some(entry.functor.clone());
    }
    let images: Vec<FunctorData> = images
        .into_iter()
        .enumerate()
        .map(|(k, f)| f.ok_or_else(|| ctx.err(format!("arrow {} has no functor", base.generators[k].0))))
        .collect::<Result<_, _>>()?;
    let fiber_cats: Vec<Arc<FinCat>> = fibers.iter().map(|(_, w)| w.host().clone()).collect();
    let functors = extend_along_words(&base.words, |x| FunctorData::identity(fiber_cats[x].clone()), &images, |a, g| {
        a.then(g).map_err(|e| e.to_string())
    })
    .map_err(|m| ctx.err(m))?;
    let data = FamilyData {
        base: b.clone(),
        fibers: fiber_cats,
        functors,
        markings: fibers.into_iter().map(|(_, w)| w).collect(),
    };
    data.check().map_err(|e| ctx.err(e.to_string()))?;
    for (k, (name, g)) in base.generators.iter().enumerate() {
        let f = &data.functors[*g];
        if f.obj_map() != images[k].obj_map() || f.mor_map() != images[k].mor_map() {
            return Err(ctx.err(format!("family hypothesis failed at {name}: relations are not preserved")));
        }
    }
    Ok(FamilyEntry { base: d.base.clone(), data })
}

/// Parses and compiles `(file name, text)` sources into one workspace.
pub fn parse_workspace(sources: &[(String, String)], budget: usize) -> Result<Workspace, WorkspaceError> {
    let mut tagged: Vec<(String, Decl)> = Vec::new();
    for (file, text) in sources {
        let decls = dsl::parse(text).map_err(|error| WorkspaceError::Syntax { file: file.clone(), error })?;
        tagged.extend(decls.into_iter().map(|d| (file.clone(), d)));
    }
    let mut ws = Workspace { decls: tagged.iter().map(|(_, d)| d.clone()).collect(), ..Default::default() };
    let mut seen: BTreeSet<(&'static str, String)> = BTreeSet::new();
    for (file, d) in &tagged {
        let ctx = Ctx { file, kind: d.kind(), name: d.name(), pos: d.pos() };
        if !seen.insert((d.kind(), d.name().to_string())) {
            return Err(ctx.err("duplicate name"));
        }
    }
    for round in 0..4 {
        for (file, d) in &tagged {
            let ctx = Ctx { file, kind: d.kind(), name: d.name(), pos: d.pos() };
            match (round, d) {
                (0, Decl::Category(c)) => {
                    let entry = compile_category(&ctx, c, budget)?;
                    ws.categories.insert(c.name.clone(), entry);
                }
                (1, Decl::Marking(MarkingDecl { name, category, members, .. })) => {
                    let entry = ws.categories.get(category).ok_or_else(|| ctx.err(format!("unknown category {category}")))?;
                    let gens = members.iter().map(|p| entry.eval(p).map_err(|m| ctx.err(m))).collect::<Result<Vec<_>, _>>()?;
                    let marking = saturate_marking(entry.cat.clone(), gens);
                    ws.markings.insert(name.clone(), MarkingEntry { category: category.clone(), marking });
                }
                (2, Decl::Functor(f)) => {
                    let entry = compile_functor(&ctx, f, &ws.categories)?;
                    ws.functors.insert(f.name.clone(), entry);
                }
                (3, Decl::Family(f)) => {
                    let entry = compile_family(&ctx, f, &ws)?;
                    ws.families.insert(f.name.clone(), entry);
                }
                _ => {}
            }
        }
    }
    Ok(ws)
}

impl Workspace {
    pub fn to_source(&self) -> String {
        dsl::to_source(&self.decls)
    }

    pub fn category(&self, name: &str) -> Result<&CategoryEntry, String> {
        self.categories.get(name).ok_or_else(|| format!("unknown category {name}"))
    }

    pub fn marking(&self, name: &str) -> Result<&MarkingEntry, String> {
        self.markings.get(name).ok_or_else(|| format!("unknown marking {name}"))
    }

    pub fn functor(&self, name: &str) -> Result<&FunctorEntry, String> {
        self.functors.get(name).ok_or_else(|| format!("unknown functor {name}"))
    }

    pub fn family(&self, name: &str) -> Result<&FamilyEntry, String> {
        self.families.get(name).ok_or_else(|| format!("unknown family {name}"))
    }

    /// The marking `name` on `category`, or the isomorphisms when `name`
    /// is absent.
    pub fn marking_on(&self, name: Option<&str>, category: &str) -> Result<Marking, String> {
        match name {
            None => Ok(Marking::isos(self.category(category)?.cat.clone())),
            Some(w) => {
                let entry = self.marking(w)?;
                if entry.category != category {
                    return Err(format!("marking {w} is on {}, not {category}", entry.category));
                }
                Ok(entry.marking.clone())
            }
        }
    }
}

/// Identifier-safe names for an arbitrary finite category.
fn generated_names(c: &FinCat) -> (Vec<String>, Vec<String>) {
    let objects = c.objects().map(|x| format!("x{x}")).collect();
    let morphisms = c.morphisms().map(|m| if c.is_identity(m) { format!("id_x{}", c.src(m)) } else { format!("m{m}") }).collect();
    (objects, morphisms)
}

/// A declaration presenting `c` by its full composition table.
pub fn describe_category(name: &str, c: &FinCat) -> CategoryDecl {
    let (objects, mors) = generated_names(c);
    let gens: Vec<Mor> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    let arrows = gens
        .iter()
        .map(|&m| ArrowDecl { name: mors[m].clone(), src: objects[c.src(m)].clone(), tgt: objects[c.tgt(m)].clone() })
        .collect();
    let mut relations = Vec::new();
    for &f in &gens {
        for &g in gens.iter().filter(|&&g| c.src(g) == c.tgt(f)) {
            relations.push((vec![mors[g].clone(), mors[f].clone()], vec![mors[c.compose(g, f)].clone()]));
        }
    }
    CategoryDecl { name: name.to_string(), objects, arrows, relations, pos: Pos::default() }
}

pub fn describe_marking(name: &str, category: &str, w: &Marking) -> MarkingDecl {
    let (_, mors) = generated_names(w.host());
    let members = w.non_isos().map(|m| vec![mors[m].clone()]).collect();
    MarkingDecl { name: name.to_string(), category: category.to_string(), members, pos: Pos::default() }
}

pub fn describe_functor(name: &str, (source, target): (&str, &str), f: &FunctorData) -> FunctorDecl {
    let (c, d) = (f.source(), f.target());
    let (c_obj, c_mor) = generated_names(c);
    let (d_obj, d_mor) = generated_names(d);
    FunctorDecl {
        name: name.to_string(),
        source: source.to_string(),
        target: target.to_string(),
        objects: c.objects().map(|x| (c_obj[x].clone(), d_obj[f.obj(x)].clone())).collect(),
        arrows: c.morphisms().filter(|&m| !c.is_identity(m)).map(|m| (c_mor[m].clone(), vec![d_mor[f.mor(m)].clone()])).collect(),
        pos: Pos::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(text: &str) -> Result<Workspace, WorkspaceError> {
        parse_workspace(&[("test.dc".into(), text.into())], DEFAULT_BUDGET)
    }

    const ARROW: &str = "category A { objects: a, b; arrows: u: a -> b; }\n";

    #[test]
    fn arrow_marking_identity() {
        let w = ws(&format!("{ARROW}marking W in A {{ u }}\nfunctor F : A -> A {{ obj a -> a; obj b -> b; arr u -> u; }}\n")).unwrap();
        assert_eq!((w.categories.len(), w.markings.len(), w.functors.len()), (1, 1, 1));
        let f = &w.functors["F"].functor;
        assert_eq!(f.mor_map(), FunctorData::identity(f.source().clone()).mor_map());
        assert_eq!(w.markings["W"].marking.non_isos().count(), 1);
    }

    #[test]
    fn non_parallel_image_is_rejected() {
        let src = format!("{ARROW}category B {{ objects: x, y; arrows: p: x -> y; }}\nfunctor F : A -> B {{ obj a -> y; obj b -> y; arr u -> p; }}\n");
        let e = ws(&src).unwrap_err().to_string();
        assert!(e.contains("functor F: not a functor: src mismatch at u"), "{e}");
        assert!(e.starts_with("test.dc:3:1"), "{e}");
    }

    #[test]
    fn free_monoid_exceeds_budget() {
        let e = ws("category N { objects: x; arrows: s: x -> x; }").unwrap_err().to_string();
        assert!(e.contains("category N: closure did not stabilize"), "{e}");
    }

    #[test]
    fn relations_and_paths() {
        let w = ws("category S { objects: a, b, c, d; arrows: f: a -> b, g: b -> d, h: a -> c, k: c -> d; relations: g.f = k.h; }\n\
             marking W in S { g.f }\n")
            .unwrap();
        let s = &w.categories["S"];
        assert_eq!(s.cat.num_morphisms(), 9);
        let m = w.markings["W"].marking.non_isos().next().unwrap();
        assert_eq!(m, s.eval(&["k".into(), "h".into()]).unwrap());
        assert!(s.eval(&["f".into(), "g".into()]).is_err());
    }

    #[test]
    fn relations_must_be_preserved() {
        let src = "category M { objects: x; arrows: e: x -> x; relations: e.e = e; }\n\
                   category Z { objects: x; arrows: r: x -> x; relations: r.r = id_x; }\n\
                   functor F : M -> Z { obj x -> x; arr e -> r; }\n";
        assert!(ws(src).unwrap_err().to_string().contains("not a functor"));
    }

    #[test]
    fn unknown_references() {
        assert!(ws("marking W in Q { u }").unwrap_err().to_string().contains("unknown category Q"));
        assert!(ws(&format!("{ARROW}marking W in A {{ v }}")).unwrap_err().to_string().contains("unknown morphism v"));
        assert!(ws(&format!("{ARROW}{ARROW}")).unwrap_err().to_string().contains("duplicate name"));
    }

    #[test]
    fn family_over_an_arrow() {
        let src = format!(
            "{ARROW}marking W in A {{ u }}\nfunctor F : A -> A {{ obj a -> a; obj b -> b; arr u -> u; }}\n\
             family X over A {{ obj a -> A with W; obj b -> A; arr u -> F; }}\n"
        );
        let w = ws(&src).unwrap();
        let data = &w.families["X"].data;
        assert_eq!(data.functors.len(), 3);
        assert_eq!(data.markings[0].non_isos().count(), 1);
    }

    #[test]
    fn described_categories_compile_back() {
        let c = dercat_core::catalog::cospan();
        let decl = Decl::Category(describe_category("C", &c));
        let w = ws(&dsl::to_source(&[decl])).unwrap();
        assert!(dercat_core::functor::find_isomorphism(&w.categories["C"].cat, &Arc::new(c)).is_some());
    }

    #[test]
    fn serialization_round_trip() {
        let src = format!("{ARROW}marking W in A {{ u }}\nfunctor F : A -> A {{ obj a -> a; obj b -> b; arr u -> u; }}\n");
        let w = ws(&src).unwrap();
        assert_eq!(ws(&w.to_source()).unwrap(), w);
    }
}
