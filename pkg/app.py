"""
Cubical Assembly Workbench - Streamlit Dashboard

Features:
- Truncation settings in the sidebar (level bound, cube variant, search bounds)
- The ten cofibration and interval axioms, checked live
- Hom-set listings and counts for both cube categories
- Composition problems from the shipped samples or pasted text
- Glue, strict glue and universe composition demos
- The propositional resizing counterexample with its certificates
"""

import streamlit as st
import pandas as pd

from components.charts import code_growth, hom_count_heatmap, refutation_pie, status_bar
from config.colors import COLOR_SCHEME
from config.constants import (
    DEFAULT_LEVEL_BOUND,
    DEFAULT_SEED,
    MAX_CUBE_DIM,
    MAX_LEVEL_BOUND,
    N_BOUND,
    STEP_BUDGET,
    TRACKER_SIZE_BOUND,
    VARIANTS,
)
from cubench import cli
from cubench.cube import Variant
from cubench.errors import CubenchError
from data.calculations import (
    checks_frame,
    code_count_table,
    hom_count_table,
    hom_listing,
    load_samples,
    orthogonality_frame,
    refutation_frame,
    status_summary,
)
from data.validation import MAX_BUDGET, MAX_N_BOUND, MAX_TRACKER_SIZE, InputValidator
from styles.css_styles import CUSTOM_CSS, status_badge

# ============================================================================
# CONFIGURATION
# ============================================================================

st.set_page_config(
    page_title="Cubical Assembly Workbench",
    page_icon="🧊",
    layout="wide",
    initial_sidebar_state="expanded"
)

DARK_BLUE = COLOR_SCHEME["dark_blue"]
LIGHT_BLUE = COLOR_SCHEME["light_blue"]

st.markdown(CUSTOM_CSS, unsafe_allow_html=True)


# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

@st.cache_data(show_spinner=False)
def run_axioms(level: int, variant: str) -> pd.DataFrame:
    config = cli.RunConfig(level=level, variant=Variant(variant))
    return checks_frame(cli.cmd_axioms(config), "axioms")


@st.cache_data(show_spinner=False)
def run_glue_demo(level: int, variant: str, seed: int, instances: int) -> pd.DataFrame:
    config = cli.RunConfig(level=level, variant=Variant(variant), seed=seed)
    return checks_frame(cli.cmd_glue_demo(config, instances), "glue")


@st.cache_resource(show_spinner=False)
def run_counterexample(tracker_size: int, budget: int, n_bound: int, variant: str, seed: int):
    config = cli.RunConfig(variant=Variant(variant), tracker_size=tracker_size, budget=budget,
                           n_bound=n_bound, seed=seed)
    return cli.cmd_counterexample(config)


def show_checks(frame: pd.DataFrame) -> None:
    for row in frame.itertuples():
        st.markdown(f"{status_badge(row.status)} <span class='check-line'>{row.check} {row.details}</span>",
                    unsafe_allow_html=True)


# ============================================================================
# HEADER
# ============================================================================

st.markdown("<div class='hero-title'><h1>CUBICAL ASSEMBLY WORKBENCH</h1>"
            "<p>Bounded, executable checks for cubical assemblies over a partial combinatory algebra</p></div>",
            unsafe_allow_html=True)

# ============================================================================
# SIDEBAR
# ============================================================================

with st.sidebar:
    st.markdown(f"""
    <div style='background: linear-gradient(135deg, {DARK_BLUE} 0%, {LIGHT_BLUE} 100%);
                padding: 15px; border-radius: 10px; text-align: center; margin-bottom: 20px;'>
        <h2 style='color: white; margin: 0; font-size: 24px;'>⚙️ CONFIGURATION</h2>
    </div>
    """, unsafe_allow_html=True)

    st.markdown("### 🧊 Truncation")
    level = st.slider("Level bound L", min_value=1, max_value=MAX_LEVEL_BOUND, value=DEFAULT_LEVEL_BOUND,
                      help="Cubes above this dimension are not built")
    variant = st.radio("Cube category", VARIANTS, horizontal=True,
                       help="B_ord: monotone maps of posets. B: all maps of the underlying sets")

    st.divider()

    st.markdown("### 🔎 Search bounds")
    tracker_size = st.slider("Tracker size", min_value=0, max_value=MAX_TRACKER_SIZE, value=TRACKER_SIZE_BOUND,
                             help="Largest code searched for trackers and sections; 0 skips sections")
    budget = st.number_input("Step budget", min_value=1, max_value=MAX_BUDGET, value=STEP_BUDGET, step=500)
    n_bound = st.number_input("Refutation window N", min_value=2, max_value=MAX_N_BOUND, value=N_BOUND)
    seed = st.number_input("Seed", min_value=0, value=DEFAULT_SEED)

    problems = InputValidator.validate_all(level, variant, tracker_size, int(budget), int(n_bound))
    for problem in problems:
        st.error(problem)

    st.divider()
    st.markdown("### 📈 About This Tool")
    st.markdown("""
    <div style='background-color: rgba(255, 215, 0, 0.1); padding: 12px; border-radius: 8px; border-left: 4px solid #FFD700;'>
    <p style='color: #003366; margin: 0; font-weight: 600; font-size: 13px;'>
    ✓ Everything is finite and decided<br>
    ✓ Every verdict is PASS, FAIL or INCONCLUSIVE<br>
    ✓ Bounds are always reported
    </p>
    </div>
    """, unsafe_allow_html=True)

if problems:
    st.stop()

st.markdown("---")

tab_about, tab_axioms, tab_homs, tab_comp, tab_glue, tab_counter = st.tabs([
    "ℹ️ About",
    "📐 Axioms",
    "🔢 Hom-sets",
    "🧩 Composition",
    "🧷 Glue & Universe",
    "🚫 Resizing Counterexample",
])

# ============================================================================
# TAB ABOUT
# ============================================================================

with tab_about:
    st.markdown("## What the workbench does")
    st.markdown("""
    A cubical assembly is a presheaf on a category of cubes whose elements come with
    realizers from a partial combinatory algebra. Everything here is truncated at the
    level bound, so each statement becomes a finite check with an explicit verdict.
    """)

    with st.expander("📌 **Cube categories**", expanded=False):
        st.markdown("""
        The n-cube is {0,1}^n. **B_ord** keeps the monotone maps between cubes, **B** keeps
        all maps. Both have connections (min and max) and the two end-points of the interval.
        """)
    with st.expander("📌 **Cofibrations**", expanded=False):
        st.markdown("""
        A cofibration on the c-cube is a sieve: a set of maps into it closed under
        precomposition. The ten axioms tab checks the closure properties the model needs.
        """)
    with st.expander("📌 **Composition**", expanded=False):
        st.markdown("""
        A composition problem gives a path, a partial tube on a sieve and a base at one end.
        A solver returns an element at the other end agreeing with the tube; every result is
        re-checked for admissibility.
        """)
    with st.expander("📌 **The counterexample**", expanded=False):
        st.markdown("""
        The codiscrete family ∇A over the discrete base ΔΓ is a fibrant, uniform,
        well-supported homotopy proposition, yet no tracked section of A exists.
        The tab checks each certificate and refutes every candidate section up to the
        chosen code size. A PASS holds at the reported bounds only.
        """)

# ============================================================================
# TAB AXIOMS
# ============================================================================

with tab_axioms:
    st.subheader(f"📐 The ten axioms at L = {level}, {variant}")
    with st.spinner("Checking axioms..."):
        axioms_frame = run_axioms(level, variant)
    col1, col2, col3 = st.columns(3)
    with col1:
        st.metric("Checks", len(axioms_frame))
    with col2:
        st.metric("Passed", int((axioms_frame["status"] == "PASS").sum()))
    with col3:
        st.metric("Failed", int((axioms_frame["status"] == "FAIL").sum()))
    show_checks(axioms_frame)

# ============================================================================
# TAB HOM-SETS
# ============================================================================

with tab_homs:
    st.subheader("🔢 Morphisms between cubes")
    col_m, col_n = st.columns(2)
    with col_m:
        m = st.number_input("m (source)", min_value=0, max_value=MAX_CUBE_DIM, value=1)
    with col_n:
        n = st.number_input("n (target)", min_value=0, max_value=MAX_CUBE_DIM, value=1)
    try:
        listing = hom_listing(int(m), int(n), Variant(variant))
        st.metric(f"|{variant}({m}, {n})|", len(listing))
        st.dataframe(listing.head(500), use_container_width=True, hide_index=True)
    except CubenchError as exc:
        st.warning(str(exc))

    col_heat, col_codes = st.columns(2)
    with col_heat:
        st.plotly_chart(hom_count_heatmap(hom_count_table(Variant(variant)), variant), use_container_width=True)
    with col_codes:
        st.markdown("**Codes in the combinatory algebra by size**")
        st.plotly_chart(code_growth(code_count_table(max(tracker_size, 1) + 1)), use_container_width=True)

# ============================================================================
# TAB COMPOSITION
# ============================================================================

with tab_comp:
    st.subheader("🧩 Composition problems")
    samples = load_samples()
    choice = st.selectbox("Sample", ["(paste your own)"] + list(samples))
    text = st.text_area("Problem file", value=samples.get(choice, ""), height=300)
    if st.button("🧮 SOLVE", use_container_width=True) and text.strip():
        try:
            lines, results = cli.cmd_comp(text)
        except CubenchError as exc:
            st.error(f"{type(exc).__name__}: {exc}")
        else:
            for result in results:
                st.code(result, language=None)
            show_checks(checks_frame(lines, "comp"))

# ============================================================================
# TAB GLUE
# ============================================================================

with tab_glue:
    st.subheader("🧷 Glue, strict glue and universe composition")
    instances = st.slider("Random instances", min_value=10, max_value=200, value=100, step=10)
    with st.spinner("Composing..."):
        glue_frame = run_glue_demo(level, variant, int(seed), instances)
    show_checks(glue_frame)

# ============================================================================
# TAB COUNTEREXAMPLE
# ============================================================================

with tab_counter:
    st.subheader("🚫 Propositional resizing fails")
    if st.button("▶️ RUN COUNTEREXAMPLE", use_container_width=True):
        with st.spinner("Building ∇A and refuting sections..."):
            st.session_state.report = run_counterexample(tracker_size, int(budget), int(n_bound),
                                                         variant, int(seed))

    if "report" in st.session_state:
        report = st.session_state.report
        frame = checks_frame(report.check_lines(), "resizing")
        verdict = frame.iloc[-1]["status"]
        st.markdown(f"### Verdict {status_badge(verdict)}", unsafe_allow_html=True)
        st.caption(report.bounds)

        col1, col2, col3, col4 = st.columns(4)
        sections = report.sections
        with col1:
            st.metric("Candidates", sections.candidates if sections else 0)
        with col2:
            st.metric("Refuted", len(sections.refuted) if sections else 0)
        with col3:
            st.metric("Survivors", len(sections.survivors) if sections else 0)
        with col4:
            st.metric("Out of budget", len(sections.inconclusive) if sections else 0)

        col_pie, col_bar = st.columns(2)
        with col_pie:
            st.markdown("**How candidate sections were refuted**")
            kinds = refutation_frame(report)
            if not kinds.empty:
                st.plotly_chart(refutation_pie(kinds), use_container_width=True)
        with col_bar:
            st.markdown("**Checks by status**")
            st.plotly_chart(status_bar(status_summary(frame)), use_container_width=True)

        st.markdown("**Orthogonality samples**")
        st.dataframe(orthogonality_frame(report), use_container_width=True, hide_index=True)
        show_checks(frame)

        with st.expander("📄 Full report", expanded=False):
            st.code(report.render(), language=None)
        st.download_button("⬇️ Download checks (CSV)", frame.to_csv(index=False), file_name="resizing.csv",
                           mime="text/csv")
