pub mod boshernitzan;
pub mod cantor;
pub mod census;
pub mod escape;
pub mod gauss;
pub mod systole;
