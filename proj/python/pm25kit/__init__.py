"""Country-level PM2.5 analytics: ETL, statistics, clustering, and forecasting."""

from ._core import (  # noqa: F401
    ArimaModel,
    ArimaOrder,
    ClusterModel,
    CountryRecord,
    Dataset,
    ElbowCurve,
    EmptyStudyError,
    FillPolicy,
    PollutionLevel,
    Pm25Error,
    Region,
    TrendCell,
    YearSeries,
    __version__,
    aicc,
    cluster_study,
    corr_density_pm25,
    corr_pm25_deaths,
    dataset_hash,
    difference,
    elbow_curve,
    embedded_dataset,
    evaluate_forecasts,
    fit,
    forecast,
    forecast_study,
    integrate,
    kmeans_fit,
    label_clusters,
    load_dataset,
    load_dataset_string,
    mean,
    parse_number,
    pearson,
    regional_trends,
    select_order,
    standardize,
    write_dataset_csv,
)
