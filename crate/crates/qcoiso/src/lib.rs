//! Coisotropic subalgebras of semisimple Lie bialgebras and candidate
//! quantizations inside `U_q(g)`, checked by exact linear algebra over `Q(q)`.

pub mod classical;
pub mod linalg;
pub mod qfield;
pub mod recipes;
pub mod render;
pub mod rootsys;
pub mod shuffle;
pub mod uqalg;
pub mod verify;
