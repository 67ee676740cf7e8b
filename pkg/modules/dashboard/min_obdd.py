import traceback

import pandas as pd
import streamlit as st

from utils.logging_setup import logger
from modules import bench


def render(config):
    """Render the minimal OBDD tab."""
    st.header("Minimal OBDD")
    mode = st.radio("Target", ["Single function", "HWB series"], horizontal=True)

    if mode == "Single function":
        function = st.text_input("Function", value="hwb:8", help="hwb:N, exact:N:I, prime:N:TAG or ghwb:N")
        exhaustive = st.checkbox("Cross-check against all orderings (n <= 9)")
        if st.button("Minimise"):
            try:
                with st.spinner(f"Minimising {function}..."):
                    result, check = bench.cmd_min_obdd(function, cap=config['min_obdd_cap'], exhaustive=exhaustive)
                rows = [{'Method': 'subset DP', 'Nodes': result.nodes, 'Arcs': result.arcs,
                         'Ordering': ' '.join(map(str, result.ordering))}]
                if check is not None:
                    rows.append({'Method': 'all orderings', 'Nodes': check.nodes, 'Arcs': check.arcs,
                                 'Ordering': ' '.join(map(str, check.ordering))})
                st.dataframe(pd.DataFrame(rows))
                if check is not None and check.nodes != result.nodes:
                    st.error("The two methods disagree.")
            except Exception as e:
                logger.error(f"Error minimising {function}: {str(e)}\n{traceback.format_exc()}")
                st.error(f"Error minimising {function}: {str(e)}")
        return

    series = st.text_input("HWB arities", value="4,6,8,10,12")
    if st.button("Run Series"):
        try:
            values = [int(token) for token in series.split(',') if token.strip()]
            with st.spinner("Minimising..."):
                df = bench.min_obdd_series(values, threshold=config['growth_ratio_threshold'],
                                           cap=config['min_obdd_cap'], workers=config['workers'])
            st.dataframe(df)
            below = df[df['meets_threshold'].eq(False)]
            if len(below):
                st.warning(f"Growth below {config['growth_ratio_threshold']} at n={', '.join(map(str, below['n']))}")
        except Exception as e:
            logger.error(f"Error in minimal OBDD series: {str(e)}\n{traceback.format_exc()}")
            st.error(f"Error in minimal OBDD series: {str(e)}")
