//! Assembling a category over `[n]` from fibers and cross-hom data.

use std::sync::Arc;

use super::Correspondence;
use crate::category::{FinCat, Mor, MorphismInfo, Obj};

/// Cross-hom data between the fibers of a prospective correspondence.
///
/// Elements of block `(i, j)` (with `i < j`) are morphisms from level `i`
/// to level `j`, indexed from zero. Objects and morphisms passed in and
/// out are fiber-local.
pub(crate) trait Cross {
    /// `(src, tgt, name)` per element of block `(i, j)`.
    fn block(&self, i: usize, j: usize) -> Vec<(Obj, Obj, String)>;
    /// `d ∘ e` for `d` in fiber `j`.
    fn post(&self, i: usize, j: usize, d: Mor, e: usize) -> usize;
    /// `e ∘ c` for `c` in fiber `i`.
    fn pre(&self, i: usize, j: usize, e: usize, c: Mor) -> usize;
    /// `e2 ∘ e1` for `e1` in block `(i, j)` and `e2` in block `(j, k)`.
    fn comp(&self, i: usize, j: usize, k: usize, e2: usize, e1: usize) -> usize;
}

#[derive(Clone, Copy)]
enum Kind {
    Fiber(usize, Mor),
    Cross(usize, usize, usize),
}

/// Builds the total category, fibers first (each in its own order), then
/// the cross blocks `(i, j)` in lexicographic order.
pub(crate) fn build_over_chain(fibers: &[Arc<FinCat>], cross: &impl Cross) -> Correspondence {
    let n = fibers.len() - 1;
    let mut obj_offset = Vec::with_capacity(n + 1);
    let mut objects = Vec::new();
    let mut degree = Vec::new();
    for (i, f) in fibers.iter().enumerate() {
        obj_offset.push(objects.len());
        objects.extend(f.object_names().iter().cloned());
        degree.extend(std::iter::repeat(i).take(f.num_objects()));
    }
    let mut morphisms = Vec::new();
    let mut kinds = Vec::new();
    let mut fiber_offset = Vec::with_capacity(n + 1);
    for (i, f) in fibers.iter().enumerate() {
        fiber_offset.push(morphisms.len());
        for m in f.morphisms() {
            morphisms.push(MorphismInfo {
                name: f.morphism_name(m).to_string(),
                src: obj_offset[i] + f.src(m),
                tgt: obj_offset[i] + f.tgt(m),
            });
            kinds.push(Kind::Fiber(i, m));
        }
    }
    let mut block_offset = vec![vec![0; n + 1]; n + 1];
    for i in 0..=n {
        for j in i + 1..=n {
            block_offset[i][j] = morphisms.len();
            for (e, (s, t, name)) in cross.block(i, j).into_iter().enumerate() {
                morphisms.push(MorphismInfo { name, src: obj_offset[i] + s, tgt: obj_offset[j] + t });
                kinds.push(Kind::Cross(i, j, e));
            }
        }
    }
    let identities = fibers
        .iter()
        .enumerate()
        .flat_map(|(i, f)| f.objects().map(move |x| (i, x)))
        .map(|(i, x)| fiber_offset[i] + fibers[i].identity(x))
        .collect();
    let total = FinCat::from_fn(objects, morphisms, identities, |g, f| match (kinds[f], kinds[g]) {
        (Kind::Fiber(i, a), Kind::Fiber(_, b)) => fiber_offset[i] + fibers[i].compose(b, a),
        (Kind::Fiber(_, c), Kind::Cross(i, j, e)) => block_offset[i][j] + cross.pre(i, j, e, c),
        (Kind::Cross(i, j, e), Kind::Fiber(_, d)) => block_offset[i][j] + cross.post(i, j, d, e),
        (Kind::Cross(i, j, e1), Kind::Cross(_, k, e2)) => block_offset[i][k] + cross.comp(i, j, k, e2, e1),
    });
    Correspondence::with_fibers(Arc::new(total), n, degree, fibers.to_vec())
}

/// The cross structure of an existing correspondence.
pub(crate) struct TotalCross<'a> {
    x: &'a Correspondence,
    /// Block members per `(i, j)`.
    blocks: Vec<Vec<Vec<Mor>>>,
    /// Position of each cross morphism in its block.
    position: Vec<usize>,
}

impl<'a> TotalCross<'a> {
    pub fn new(x: &'a Correspondence) -> Self {
        let n = x.base_length();
        let mut blocks = vec![vec![Vec::new(); n + 1]; n + 1];
        let mut position = vec![usize::MAX; x.total().num_morphisms()];
        for m in x.total().morphisms() {
            let (i, j) = x.morphism_degrees(m);
            if i < j {
                position[m] = blocks[i][j].len();
                blocks[i][j].push(m);
            }
        }
        Self { x, blocks, position }
    }

    pub fn members(&self, i: usize, j: usize) -> &[Mor] {
        &self.blocks[i][j]
    }
}

impl Cross for TotalCross<'_> {
    fn block(&self, i: usize, j: usize) -> Vec<(Obj, Obj, String)> {
        let t = self.x.total();
        self.blocks[i][j]
            .iter()
            .map(|&m| (self.x.local(t.src(m)), self.x.local(t.tgt(m)), t.morphism_name(m).to_string()))
            .collect()
    }

    fn post(&self, i: usize, j: usize, d: Mor, e: usize) -> usize {
        let h = self.x.total().compose(self.x.global_morphism(j, d), self.blocks[i][j][e]);
        self.position[h]
    }

    fn pre(&self, i: usize, j: usize, e: usize, c: Mor) -> usize {
        let h = self.x.total().compose(self.blocks[i][j][e], self.x.global_morphism(i, c));
        self.position[h]
    }

    fn comp(&self, i: usize, j: usize, k: usize, e2: usize, e1: usize) -> usize {
        let h = self.x.total().compose(self.blocks[j][k][e2], self.blocks[i][j][e1]);
        self.position[h]
    }
}
