//! Finite categories, markings, localization and derived functors computed
//! through Grothendieck constructions.

pub mod catalog;
pub mod category;
pub mod correspondence;
pub mod derived;
mod enumerate;
pub mod error;
pub mod functor;
pub mod localization;
pub mod marking;
pub mod natural;
pub mod presentation;
mod util;

pub use category::{chain, product, CategoryTable, FinCat, Mor, MorphismInfo, Obj, ValidationReport, Violation};
pub use correspondence::{Correspondence, Fiber};
pub use error::{CategoryError, CorrespondenceError, DerivedError, LocalizationError, PresentationError};
pub use localization::{localize, LocalizationResult};
pub use functor::{check_equivalence, quasi_inverse, EquivalenceWitness, FunctorData, FunctorSearch};
pub use marking::{saturate_marking, Marking};
pub use natural::NatTrans;
pub use presentation::{compile_presentation, compile_with_words, Compiled, Generator, Path, Presentation};
