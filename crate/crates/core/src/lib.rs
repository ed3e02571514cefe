pub mod barycenter;
pub mod graded;
pub mod boundary;
pub mod certify;
pub mod expr;
pub mod interp;
pub mod model;
pub mod functional;
pub mod critical;
pub mod bubble;
pub mod cli;
