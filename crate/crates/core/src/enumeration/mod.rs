//! Isomorph-free enumeration, canonical forms and graph6 interchange.

mod canon;
mod generate;
mod graph6;

pub use canon::{
    are_isomorphic, canonical_form, canonical_form_with_labeling, canonical_graph,
    canonical_labeling, CanonicalForm, Labeling,
};
pub use generate::{collect, count, enumerate, enumerate_parallel, EnumSpec, MAX_EDGES};
pub use graph6::{parse_graph6, write_graph6};
