use std::path::Path;

// The SDP backend calls Fortran BLAS/LAPACK through blas-sys/lapack-sys,
// which declare the symbols but link nothing. The archives are provided
// here instead of via a *-src provider crate because the alternatives
// managed libblas.a in the toolchain default path may be an OpenBLAS build
// whose runtime CPU dispatch is skipped under static linking; the reference
// archives in the blas/ and lapack/ subdirectories are always correct.
// lapack must precede blas on the link line.
fn main() {
    for (dir, name) in [
        ("/usr/lib/x86_64-linux-gnu/lapack", "lapack"),
        ("/usr/lib/x86_64-linux-gnu/blas", "blas"),
    ] {
        let archive = Path::new(dir).join(format!("lib{name}.a"));
        assert!(
            archive.exists(),
            "{} missing; install the Debian blas/lapack dev packages",
            archive.display()
        );
        println!("cargo:rustc-link-search=native={dir}");
        println!("cargo:rustc-link-lib=static={name}");
    }
    // Fortran runtime for the reference archives
    println!("cargo:rustc-link-lib=dylib=gfortran");
}
