// placeholder
pub fn main() {}
