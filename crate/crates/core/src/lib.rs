pub mod cats;
pub mod completions;
pub mod finpresheaf;
pub mod intp;
pub mod mat;
pub mod suite;
