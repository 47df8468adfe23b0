use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extensions of extension fields are not supported")]
    NestedExtension,
    #[error("modulus {0} must have degree >= 1 and a nonzero constant term")]
    DegenerateModulus(String),
    #[error("unknown field '{0}' (expected q or gf<p>)")]
    UnknownField(String),
    #[error("denominator of {0} vanishes in GF({1})")]
    DenominatorVanishes(String, u64),
    #[error("polynomial syntax error at {pos}: {msg}")]
    PolySyntax { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge '{edge}' refers to unknown vertex '{endpoint}'")]
    DanglingEndpoint { edge: String, endpoint: String },
    #[error("name '{0}' is used more than once")]
    DuplicateName(String),
    #[error("edge class '{0}' has multiplicity zero")]
    ZeroMultiplicity(String),
    #[error("'{0}' is not a valid identifier")]
    InvalidName(String),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("unknown edge '{0}'")]
    UnknownEdge(String),
    #[error("graph has {size} vertices, more than the bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("vertex set is not hereditary and saturated")]
    NotHereditarySaturated,
    #[error("vertex set is not hereditary")]
    NotHereditary,
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("not an admissible pair: {0}")]
    NotAdmissible(String),
    #[error("vertex '{0}' is not a source")]
    NotASource(String),
    #[error("vertex '{0}' is a sink")]
    IsASink(String),
    #[error("cycle has an entry at vertex '{0}'")]
    HasEntry(String),
    #[error("graph has an infinite emitter; path counts are infinite")]
    InfiniteCount,
    #[error("graph JSON: {0}")]
    Json(String),
    #[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<GraphError>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("scalar fields differ: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("elements live over different graphs")]
    GraphMismatch,
    #[error("path is not closed")]
    NotClosed,
    #[error("no fullness witness for vertex '{0}'")]
    NoWitness(String),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("syntax error at {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChenError {
    #[error("vertex '{0}' is not a sink")]
    NotASink(String),
    #[error("cycle {0} is not exclusive")]
    NotExclusive(String),
    #[error("polynomial {0} is not irreducible (or irreducibility is undecided; pass assume_irreducible)")]
    ReduciblePolynomial(String),
    #[error("polynomial {0} gives the untwisted module; use the infinite-path type")]
    UntwistedPolynomial(String),
    #[error("vertex '{0}' does not have the required emitter shape: {1}")]
    WrongEmitterShape(String, String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("lazy path inspection exceeded depth {0}")]
    LazyDepthExceeded(usize),
    #[error("tail of the lazy path is not periodic within depth {0}")]
    UndecidableLazyTail(usize),
    #[error("module datum is not contained in the hereditary set: {0}")]
    DatumEscapesH(String),
    #[error("scalar fields differ: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("graph has {size} vertices, more than the bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("cofinal path search exceeded its bound")]
    SearchBoundExceeded,
    #[error("graph is not downward directed with Condition (L)")]
    NotCofinal,
    #[error("type I descriptor needs a concrete irreducible polynomial")]
    NoIrreduciblePolynomial,
    #[error("realized module has annihilator {found}, expected {expected}")]
    MismatchedDescriptor { expected: String, found: String },
    #[error(transparent)]
    Chen(#[from] ChenError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("vertex '{0}' carries no single loop")]
    NotALoop(String),
    #[error("vertex '{0}' is an infinite emitter")]
    InfiniteEmitter(String),
    #[error("the vertices other than '{0}' do not form a hereditary saturated set")]
    NotMaximal(String),
    #[error("polynomial {0} is not irreducible")]
    Reducible(String),
    #[error("the two cycles must be distinct and based at '{0}'")]
    NotBothBasedAtV(String),
    #[error("exhaustive simplicity check needs {0} vectors, above the limit")]
    TooLargeForExhaustive(String),
    #[error("constructive simplicity check requires one-dimensional vertex spaces")]
    NotConstructive,
    #[error("Morita step failed verification: {0}")]
    StepVerification(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Chen(#[from] ChenError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}
