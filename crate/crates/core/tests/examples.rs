macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/",
                stringify!($name),
                ".rs"
            ));
        }

        #[test]
        fn $name() {
            $name::run_example().expect("example runs");
        }
    };
}

example!(field_info);
example!(gauss_sums);
example!(spheres);
example!(fourier_decay);
example!(diameters);
example!(configurations);
example!(pseudo_ap);
example!(two_distance);
example!(pseudo_random);
example!(verify_all);
