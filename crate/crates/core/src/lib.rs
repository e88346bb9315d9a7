pub mod cli;
pub mod exterior_field;
pub mod kernel;
pub mod solid_motion;
pub mod special_functions;
