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
            $name::main().expect(concat!(stringify!($name), " example failed"));
        }
    };
}

example!(tensor_products);
example!(truncated_algebra);
example!(signatures);
example!(rank_decomposition);
example!(factoring);
example!(rank_gap);
