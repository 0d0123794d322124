pub mod construct;
pub mod expand;
pub mod integrate;
pub mod selftest;
pub mod verify;
