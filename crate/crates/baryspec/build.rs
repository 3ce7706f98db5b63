fn main() {
    // LAPACK/BLAS provider: the system OpenBLAS.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
