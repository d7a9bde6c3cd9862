//! Exact computations on totally nonnegative matrix cells: Cauchon diagrams,
//! restricted permutations, the minor families `M(w)` and `M(C)`, the
//! restoration and deleting derivations algorithms, and the Poisson brackets
//! behind them.

pub mod arith;
pub mod cells;
pub mod combinat;
pub mod families;
pub mod io;
pub mod minors;
pub mod poisson;
pub mod restoration;
pub mod verify;

pub use arith::{ArithError, EntryDomain, LaurentPoly, Matrix, Rational, VarRegistry};
pub use cells::{CellDescriptor, CellsError, MatchedPair, TnnVerdict};
pub use combinat::{CauchonDiagram, CombinatError, IndexSet, RestrictedPermutation};
pub use families::PartialPermutation;
pub use minors::{MinorError, MinorFamily, MinorId};
pub use poisson::BracketTable;
pub use restoration::{MatrixTrace, RestorationError, StepIndex};
