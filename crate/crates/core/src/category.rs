//! Finite categories stored as explicit composition tables.

use std::fmt;

use crate::error::CategoryError;

/// Index of an object inside a [`FinCat`].
pub type Obj = usize;
/// Index of a morphism inside a [`FinCat`].
pub type Mor = usize;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorphismInfo {
    pub name: String,
    pub src: Obj,
    pub tgt: Obj,
}

/// A possibly defective composition table.
///
/// This is the raw input accepted by [`validate_table`]; a table that
/// validates cleanly can be turned into a [`FinCat`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryTable {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismInfo>,
    pub identities: Vec<Mor>,
    /// `comp[(g, f)]`, stored row-major as `comp[g * n + f]`.
    pub comp: Vec<Option<Mor>>,
}

impl CategoryTable {
    pub fn new(objects: Vec<String>, morphisms: Vec<MorphismInfo>, identities: Vec<Mor>) -> Self {
        let n = morphisms.len();
        Self { objects, morphisms, identities, comp: vec![None; n * n] }
    }

    pub fn set(&mut self, g: Mor, f: Mor, h: Mor) {
        let n = self.morphisms.len();
        self.comp[g * n + f] = Some(h);
    }

    pub fn get(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.comp[g * self.morphisms.len() + f]
    }
}

/// One violated axiom instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BadEndpoint { morphism: Mor },
    BadIdentity { object: Obj },
    Missing { g: Mor, f: Mor },
    NotComposable { g: Mor, f: Mor },
    WrongEnds { g: Mor, f: Mor, result: Mor },
    LeftUnit { f: Mor },
    RightUnit { f: Mor },
    Associativity { h: Mor, g: Mor, f: Mor },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadEndpoint { morphism } => write!(out, "morphism {morphism} has an unknown endpoint"),
            Violation::BadIdentity { object } => write!(out, "identity of object {object} is not an endomorphism of it"),
            Violation::Missing { g, f } => write!(out, "totality: composite ({g}, {f}) undefined"),
            Violation::NotComposable { g, f } => write!(out, "composite ({g}, {f}) defined on a non-composable pair"),
            Violation::WrongEnds { g, f, result } => {
                write!(out, "composite ({g}, {f}) = {result} has wrong source or target")
            }
            Violation::LeftUnit { f } => write!(out, "unit law: id . {f} != {f}"),
            Violation::RightUnit { f } => write!(out, "unit law: {f} . id != {f}"),
            Violation::Associativity { h, g, f } => write!(out, "associativity fails at ({h}, {g}, {f})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every violated category axiom in `table`.
pub fn validate_table(table: &CategoryTable) -> ValidationReport {
    let mut violations = Vec::new();
    let n_obj = table.objects.len();
    let n = table.morphisms.len();
    for (i, m) in table.morphisms.iter().enumerate() {
        if m.src >= n_obj || m.tgt >= n_obj {
            violations.push(Violation::BadEndpoint { morphism: i });
        }
    }
    if table.identities.len() != n_obj {
        for object in table.identities.len()..n_obj {
            violations.push(Violation::BadIdentity { object });
        }
    }
    for (object, &id) in table.identities.iter().enumerate() {
        if id >= n || table.morphisms[id].src != object || table.morphisms[id].tgt != object {
            violations.push(Violation::BadIdentity { object });
        }
    }
    if !violations.is_empty() || table.comp.len() != n * n {
        return ValidationReport { violations };
    }
    let info = &table.morphisms;
    let mut structural = false;
    for g in 0..n {
        for f in 0..n {
            let composable = info[f].tgt == info[g].src;
            match (composable, table.get(g, f)) {
                (true, None) => {
                    violations.push(Violation::Missing { g, f });
                    structural = true;
                }
                (false, Some(_)) => violations.push(Violation::NotComposable { g, f }),
                (true, Some(h)) => {
                    if h >= n || info[h].src != info[f].src || info[h].tgt != info[g].tgt {
                        violations.push(Violation::WrongEnds { g, f, result: h });
                        structural = true;
                    }
                }
                (false, None) => {}
            }
        }
    }
    for f in 0..n {
        let id_t = table.identities[info[f].tgt];
        let id_s = table.identities[info[f].src];
        if table.get(id_t, f) != Some(f) {
            violations.push(Violation::LeftUnit { f });
        }
        if table.get(f, id_s) != Some(f) {
            violations.push(Violation::RightUnit { f });
        }
    }
    if structural {
        return ValidationReport { violations };
    }
    for f in 0..n {
        for g in (0..n).filter(|&g| info[g].src == info[f].tgt) {
            let gf = table.get(g, f).unwrap();
            for h in (0..n).filter(|&h| info[h].src == info[g].tgt) {
                let hg = table.get(h, g).unwrap();
                if table.get(hg, f) != table.get(h, gf) {
                    violations.push(Violation::Associativity { h, g, f });
                }
            }
        }
    }
    ValidationReport { violations }
}

/// A finite category with a total, validated composition table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<MorphismInfo>,
    identities: Vec<Mor>,
    comp: Vec<u32>,
    homs: Vec<Vec<Mor>>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "FinCat({} objects, {} morphisms)", self.objects.len(), self.morphisms.len())
    }
}

impl TryFrom<CategoryTable> for FinCat {
    type Error = CategoryError;

    fn try_from(table: CategoryTable) -> Result<Self, Self::Error> {
        let report = validate_table(&table);
        if !report.is_ok() {
            return Err(CategoryError::Invalid(report.violations));
        }
        Ok(Self::from_valid_table(table))
    }
}

impl FinCat {
    fn from_valid_table(table: CategoryTable) -> Self {
        let comp = table.comp.iter().map(|c| c.map_or(NONE, |h| h as u32)).collect();
        Self::assemble(table.objects, table.morphisms, table.identities, comp)
    }

    fn assemble(objects: Vec<String>, morphisms: Vec<MorphismInfo>, identities: Vec<Mor>, comp: Vec<u32>) -> Self {
        let n_obj = objects.len();
        let mut homs = vec![Vec::new(); n_obj * n_obj];
        for (i, m) in morphisms.iter().enumerate() {
            homs[m.src * n_obj + m.tgt].push(i);
        }
        Self { objects, morphisms, identities, comp, homs }
    }

    /// Builds a category from morphism data and a composition function.
    ///
    /// `compose(g, f)` is only called on composable pairs. The result is
    /// checked against the axioms in unit tests of this crate.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<MorphismInfo>,
        identities: Vec<Mor>,
        mut compose: impl FnMut(Mor, Mor) -> Mor,
    ) -> Self {
        let n = morphisms.len();
        let mut comp = vec![NONE; n * n];
        for g in 0..n {
            for f in 0..n {
                if morphisms[f].tgt == morphisms[g].src {
                    comp[g * n + f] = compose(g, f) as u32;
                }
            }
        }
        let cat = Self::assemble(objects, morphisms, identities, comp);
        #[cfg(test)]
        debug_assert!(cat.validate().is_ok(), "from_fn produced an invalid category: {:?}", cat.validate());
        cat
    }

    /// Like [`FinCat::from_fn`] but always validates.
    pub fn try_from_fn(
        objects: Vec<String>,
        morphisms: Vec<MorphismInfo>,
        identities: Vec<Mor>,
        mut compose: impl FnMut(Mor, Mor) -> Mor,
    ) -> Result<Self, CategoryError> {
        let mut table = CategoryTable::new(objects, morphisms, identities);
        let n = table.morphisms.len();
        for g in 0..n {
            for f in 0..n {
                if table.morphisms[f].tgt == table.morphisms[g].src {
                    let h = compose(g, f);
                    table.set(g, f, h);
                }
            }
        }
        Self::try_from(table)
    }

    pub fn to_table(&self) -> CategoryTable {
        CategoryTable {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            identities: self.identities.clone(),
            comp: self.comp.iter().map(|&c| (c != NONE).then_some(c as usize)).collect(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_table(&self.to_table())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> std::ops::Range<Obj> {
        0..self.objects.len()
    }

    pub fn morphisms(&self) -> std::ops::Range<Mor> {
        0..self.morphisms.len()
    }

    pub fn object_name(&self, x: Obj) -> &str {
        &self.objects[x]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism(&self, m: Mor) -> &MorphismInfo {
        &self.morphisms[m]
    }

    pub fn morphism_name(&self, m: Mor) -> &str {
        &self.morphisms[m].name
    }

    pub fn src(&self, m: Mor) -> Obj {
        self.morphisms[m].src
    }

    pub fn tgt(&self, m: Mor) -> Obj {
        self.morphisms[m].tgt
    }

    pub fn identity(&self, x: Obj) -> Mor {
        self.identities[x]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.identities[self.src(m)] == m
    }

    /// `g ∘ f`, or `None` when `tgt(f) != src(g)`.
    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        let c = self.comp[g * self.morphisms.len() + f];
        (c != NONE).then_some(c as usize)
    }

    /// `g ∘ f`. Panics on a non-composable pair.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        self.try_compose(g, f)
            .unwrap_or_else(|| panic!("non-composable pair ({}, {})", self.morphism_name(g), self.morphism_name(f)))
    }

    /// Composes a path given in application order.
    pub fn compose_path(&self, start: Obj, path: &[Mor]) -> Mor {
        path.iter().fold(self.identity(start), |acc, &m| self.compose(m, acc))
    }

    pub fn hom(&self, x: Obj, y: Obj) -> &[Mor] {
        &self.homs[x * self.objects.len() + y]
    }

    pub fn find_object(&self, name: &str) -> Option<Obj> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn find_morphism(&self, name: &str) -> Option<Mor> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// Some two-sided inverse of `m`, if one exists.
    pub fn inverse(&self, m: Mor) -> Option<Mor> {
        let (x, y) = (self.src(m), self.tgt(m));
        self.hom(y, x)
            .iter()
            .copied()
            .find(|&n| self.compose(n, m) == self.identity(x) && self.compose(m, n) == self.identity(y))
    }

    pub fn is_isomorphism(&self, m: Mor) -> Result<bool, CategoryError> {
        if m >= self.num_morphisms() {
            return Err(CategoryError::UnknownMorphism(m.to_string()));
        }
        Ok(self.inverse(m).is_some())
    }

    pub fn is_iso(&self, m: Mor) -> bool {
        self.inverse(m).is_some()
    }

    /// Same shape and composition table, ignoring names.
    pub fn same_table(&self, other: &FinCat) -> bool {
        self.objects.len() == other.objects.len()
            && self.identities == other.identities
            && self.comp == other.comp
            && self
                .morphisms
                .iter()
                .zip(&other.morphisms)
                .all(|(a, b)| a.src == b.src && a.tgt == b.tgt)
            && self.morphisms.len() == other.morphisms.len()
    }

    pub fn opposite(&self) -> FinCat {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| MorphismInfo { name: m.name.clone(), src: m.tgt, tgt: m.src })
            .collect();
        let n = self.morphisms.len();
        let mut comp = vec![NONE; n * n];
        for g in 0..n {
            for f in 0..n {
                // g ∘op f = f ∘ g
                comp[g * n + f] = self.comp[f * n + g];
            }
        }
        Self::assemble(self.objects.clone(), morphisms, self.identities.clone(), comp)
    }

    /// Full subcategory on `objects` (kept in the given order) together
    /// with the list of ambient morphism ids, in ambient order.
    pub fn full_subcategory(&self, objects: &[Obj]) -> (FinCat, Vec<Mor>) {
        let mut local = vec![usize::MAX; self.num_objects()];
        for (i, &x) in objects.iter().enumerate() {
            local[x] = i;
        }
        let kept: Vec<Mor> = self
            .morphisms()
            .filter(|&m| local[self.src(m)] != usize::MAX && local[self.tgt(m)] != usize::MAX)
            .collect();
        self.subcategory_from(objects, &local, kept)
    }

    /// Wide-or-not subcategory given by explicit object and morphism lists.
    /// The morphism list must be closed under composition and contain the
    /// identities of the listed objects.
    pub fn subcategory(&self, objects: &[Obj], morphisms: &[Mor]) -> (FinCat, Vec<Mor>) {
        let mut local = vec![usize::MAX; self.num_objects()];
        for (i, &x) in objects.iter().enumerate() {
            local[x] = i;
        }
        self.subcategory_from(objects, &local, morphisms.to_vec())
    }

    fn subcategory_from(&self, objects: &[Obj], local: &[usize], kept: Vec<Mor>) -> (FinCat, Vec<Mor>) {
        let mut local_mor = vec![usize::MAX; self.num_morphisms()];
        for (i, &m) in kept.iter().enumerate() {
            local_mor[m] = i;
        }
        let names = objects.iter().map(|&x| self.objects[x].clone()).collect();
        let infos = kept
            .iter()
            .map(|&m| MorphismInfo {
                name: self.morphisms[m].name.clone(),
                src: local[self.src(m)],
                tgt: local[self.tgt(m)],
            })
            .collect();
        let ids = objects.iter().map(|&x| local_mor[self.identity(x)]).collect();
        let sub = FinCat::from_fn(names, infos, ids, |g, f| local_mor[self.compose(kept[g], kept[f])]);
        (sub, kept)
    }

    /// Renames objects and morphisms; shapes are untouched.
    pub fn renamed(&self, objects: Vec<String>, morphisms: Vec<String>) -> FinCat {
        assert_eq!(objects.len(), self.objects.len());
        assert_eq!(morphisms.len(), self.morphisms.len());
        let mut out = self.clone();
        out.objects = objects;
        for (info, name) in out.morphisms.iter_mut().zip(morphisms) {
            info.name = name;
        }
        out
    }
}

/// The poset `[n] = {0 < 1 < … < n}`.
///
/// Objects are named `0..=n`; the morphism `i → j` is named `i<j`, and
/// identities `id_i`. Morphisms are ordered by `(i, j)` lexicographically.
pub fn chain(n: usize) -> FinCat {
    let objects: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let mut morphisms = Vec::new();
    let mut index = vec![vec![usize::MAX; n + 1]; n + 1];
    for i in 0..=n {
        for j in i..=n {
            index[i][j] = morphisms.len();
            let name = if i == j { format!("id_{i}") } else { format!("{i}<{j}") };
            morphisms.push(MorphismInfo { name, src: i, tgt: j });
        }
    }
    let ids = (0..=n).map(|i| index[i][i]).collect();
    let info = morphisms.clone();
    FinCat::from_fn(objects, morphisms, ids, |g, f| index[info[f].src][info[g].tgt])
}

/// Index of the morphism `i → j` of [`chain`].
pub fn chain_arrow(n: usize, i: usize, j: usize) -> Mor {
    assert!(i <= j && j <= n);
    // rows before i contribute (n+1) + n + … + (n+2-i) morphisms
    let before: usize = (0..i).map(|r| n + 1 - r).sum();
    before + (j - i)
}

/// Cartesian product `a × b`. Object `(x, y)` has index `x * |Ob b| + y`,
/// morphism `(m, n)` has index `m * |Mor b| + n`.
pub fn product(a: &FinCat, b: &FinCat) -> FinCat {
    let (nb_obj, nb_mor) = (b.num_objects(), b.num_morphisms());
    let mut objects = Vec::new();
    for x in a.objects() {
        for y in b.objects() {
            objects.push(format!("({},{})", a.object_name(x), b.object_name(y)));
        }
    }
    let mut morphisms = Vec::new();
    for m in a.morphisms() {
        for n in b.morphisms() {
            morphisms.push(MorphismInfo {
                name: format!("({},{})", a.morphism_name(m), b.morphism_name(n)),
                src: a.src(m) * nb_obj + b.src(n),
                tgt: a.tgt(m) * nb_obj + b.tgt(n),
            });
        }
    }
    let ids = a
        .objects()
        .flat_map(|x| b.objects().map(move |y| (x, y)))
        .map(|(x, y)| a.identity(x) * nb_mor + b.identity(y))
        .collect();
    FinCat::from_fn(objects, morphisms, ids, |g, f| {
        let (ga, gb) = (g / nb_mor, g % nb_mor);
        let (fa, fb) = (f / nb_mor, f % nb_mor);
        a.compose(ga, fa) * nb_mor + b.compose(gb, fb)
    })
}

/// `c × [n]`.
pub fn product_with_chain(c: &FinCat, n: usize) -> FinCat {
    product(c, &chain(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow_table() -> CategoryTable {
        let objects = vec!["0".to_string(), "1".to_string()];
        let morphisms = vec![
            MorphismInfo { name: "id_0".into(), src: 0, tgt: 0 },
            MorphismInfo { name: "id_1".into(), src: 1, tgt: 1 },
            MorphismInfo { name: "u".into(), src: 0, tgt: 1 },
        ];
        let mut t = CategoryTable::new(objects, morphisms, vec![0, 1]);
        t.set(0, 0, 0);
        t.set(1, 1, 1);
        t.set(2, 0, 2);
        t.set(1, 2, 2);
        t
    }

    #[test]
    fn arrow_validates() {
        assert!(validate_table(&arrow_table()).is_ok());
        assert!(chain(1).validate().is_ok());
        assert!(chain(3).validate().is_ok());
    }

    #[test]
    fn planted_unit_violation_is_reported() {
        let mut t = arrow_table();
        t.set(2, 0, 0);
        let report = validate_table(&t);
        assert!(report.violations.contains(&Violation::WrongEnds { g: 2, f: 0, result: 0 }));
        // endpoints are fine but the unit law is not
        let mut t = arrow_table();
        t.morphisms.push(MorphismInfo { name: "v".into(), src: 0, tgt: 1 });
        t.comp = vec![None; 16];
        for (g, f, h) in [(0, 0, 0), (1, 1, 1), (2, 0, 3), (1, 2, 2), (3, 0, 3), (1, 3, 3)] {
            t.set(g, f, h);
        }
        let report = validate_table(&t);
        assert_eq!(report.violations, vec![Violation::RightUnit { f: 2 }]);
    }

    #[test]
    fn planted_totality_violation_is_reported() {
        // one object, morphisms id and u with u∘u left undefined
        let objects = vec!["x".to_string()];
        let morphisms = vec![
            MorphismInfo { name: "id".into(), src: 0, tgt: 0 },
            MorphismInfo { name: "u".into(), src: 0, tgt: 0 },
            MorphismInfo { name: "v".into(), src: 0, tgt: 0 },
        ];
        let mut t = CategoryTable::new(objects, morphisms, vec![0]);
        for m in 0..3 {
            t.set(0, m, m);
            t.set(m, 0, m);
        }
        t.set(2, 1, 2);
        t.set(1, 2, 2);
        t.set(2, 2, 2);
        let report = validate_table(&t);
        assert_eq!(report.violations, vec![Violation::Missing { g: 1, f: 1 }]);
    }

    #[test]
    fn chain_arrow_indexing() {
        let c = chain(3);
        for i in 0..=3 {
            for j in i..=3 {
                let m = chain_arrow(3, i, j);
                assert_eq!((c.src(m), c.tgt(m)), (i, j));
            }
        }
    }

    #[test]
    fn opposite_is_involutive() {
        let c = product_with_chain(&chain(1), 1);
        assert_eq!(c.opposite().opposite(), c);
        assert!(c.opposite().validate().is_ok());
    }

    #[test]
    fn square_has_nine_morphisms() {
        let sq = product_with_chain(&chain(1), 1);
        assert_eq!(sq.num_objects(), 4);
        assert_eq!(sq.num_morphisms(), 9);
        assert!(sq.validate().is_ok());
    }

    #[test]
    fn isomorphisms_in_chain() {
        let c = chain(1);
        assert!(c.is_isomorphism(c.identity(0)).unwrap());
        assert!(!c.is_isomorphism(chain_arrow(1, 0, 1)).unwrap());
        assert!(c.is_isomorphism(99).is_err());
    }
}
