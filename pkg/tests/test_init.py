"""Test package initialization."""


def test_import_equichain():
    """Test that the package can be imported."""
    import equichain

    assert equichain.__version__ == "0.1.0"


def test_import_all_modules():
    """Test that all modules can be imported."""
    from equichain import (
        algebra,
        bar,
        cli,
        complexes,
        config,
        errors,
        homology,
        ids,
        logging_config,
        models,
        pipeline,
        pydantic_models,
        reduction,
        rinfty,
        schema,
        selftest,
        transfer,
        workbench,
    )

    modules = [
        algebra, bar, cli, complexes, config, errors, homology, ids, logging_config,
        models, pipeline, pydantic_models, reduction, rinfty, schema, selftest,
        transfer, workbench,
    ]
    assert all(module is not None for module in modules)


def test_errors_are_value_errors():
    """Test the exception hierarchy."""
    from equichain.errors import (
        EquichainError,
        FillerError,
        PipelineError,
        ReductionError,
        TruncationError,
    )

    for cls in (FillerError, PipelineError, ReductionError):
        assert issubclass(cls, EquichainError)
    assert issubclass(EquichainError, ValueError)
    e = TruncationError("EZ/2", 5, 3)
    assert (e.degree, e.bound) == (5, 3)
    assert "truncated at degree 3" in str(e)
