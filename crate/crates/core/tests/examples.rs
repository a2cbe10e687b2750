//! Every example runs to completion with its built-in inputs.

#[allow(dead_code)]
#[path = "../examples/classify.rs"]
mod classify;
#[allow(dead_code)]
#[path = "../examples/canonical_forms.rs"]
mod canonical_forms;
#[allow(dead_code)]
#[path = "../examples/isomorphism.rs"]
mod isomorphism;
#[allow(dead_code)]
#[path = "../examples/towers.rs"]
mod towers;
#[allow(dead_code)]
#[path = "../examples/limit_ranks.rs"]
mod limit_ranks;
#[allow(dead_code)]
#[path = "../examples/ordinals.rs"]
mod ordinals;
#[allow(dead_code)]
#[path = "../examples/oracle.rs"]
mod oracle;
#[allow(dead_code)]
#[path = "../examples/parsing.rs"]
mod parsing;

macro_rules! runs {
    ($($name:ident),*) => {
        $(
            #[test]
            fn $name() {
                $name::run(&[]).expect(concat!(stringify!($name), " example failed"));
            }
        )*
    };
}

runs!(classify, canonical_forms, isomorphism, towers, limit_ranks, ordinals, oracle, parsing);
