from pathlib import Path

import pytest
import yaml

from primcat.containerize import (
    ContainerConfig,
    FULL_BASE,
    IMAGE_BASE,
    NLP_BASE,
    generate_dockerfile,
    generate_pod_manifest,
    pod_name,
    select_base_image,
)
from primcat.corpus import fixture_pipelines
from primcat.errors import InvalidImageRefError, UnknownPrimitiveError
from primcat.planner import Pipeline, PipelineStep, validate_pipeline

GOLDEN = Path(__file__).parent / "golden"

_BASE_TAGS = {"nlp": "d3m/base-nlp:1", "vision": "d3m/base-vision:1",
              "mixed": "d3m/base-full:1"}
_GOLDEN_NAMES = {"nlp": "nlp", "vision": "vision", "mixed": "full"}


class TestSelectBaseImage:
    def test_all_text_steps(self, demo_view):
        base = select_base_image(fixture_pipelines()["nlp"], demo_view)
        assert base.kind == NLP_BASE

    def test_image_video_steps(self, demo_view):
        base = select_base_image(fixture_pipelines()["vision"], demo_view)
        assert base.kind == IMAGE_BASE

    def test_mixed_modalities_fall_through(self, demo_view):
        base = select_base_image(fixture_pipelines()["mixed"], demo_view)
        assert base.kind == FULL_BASE

    def test_agnostic_only_union_is_full(self, demo_view):
        pipeline = Pipeline(
            id="d3m.pipelines.agnostic", dataset_id="d3m.datasets.census_income",
            problem_id="d3m.problems.income_classification",
            steps=(PipelineStep("d3m.sklearn.mean_imputer", "1.0.0", {}),))
        assert select_base_image(pipeline, demo_view).kind == FULL_BASE

    def test_exactly_one_branch_for_every_union(self):
        modality_pool = ("TABULAR", "TEXT", "IMAGE", "VIDEO", "TIMESERIES",
                         "GRAPH", "AUDIO")
        from itertools import combinations
        nlp = frozenset({"TEXT"})
        vision = frozenset({"IMAGE", "VIDEO"})
        for size in range(len(modality_pool) + 1):
            for union in map(frozenset, combinations(modality_pool, size)):
                branches = [bool(union and union <= nlp),
                            bool(union and union <= vision)]
                # at most one narrow branch; the fall-through covers the rest
                assert sum(branches) <= 1

    def test_unknown_primitive(self, demo_view):
        pipeline = Pipeline(
            id="d3m.pipelines.ghost", dataset_id="d3m.datasets.census_income",
            problem_id="d3m.problems.income_classification",
            steps=(PipelineStep("d3m.ghost", "1.0.0", {}),))
        with pytest.raises(UnknownPrimitiveError):
            select_base_image(pipeline, demo_view)


class TestDockerfile:
    @pytest.mark.parametrize("fixture_name", ["nlp", "vision", "mixed"])
    def test_golden(self, demo_view, fixture_name):
        pipeline = fixture_pipelines()[fixture_name]
        golden = (GOLDEN / f"dockerfile_{_GOLDEN_NAMES[fixture_name]}.txt").read_text()
        assert generate_dockerfile(pipeline, demo_view) == golden

    def test_deterministic(self, demo_view):
        pipeline = fixture_pipelines()["nlp"]
        assert (generate_dockerfile(pipeline, demo_view)
                == generate_dockerfile(pipeline, demo_view))

    def test_install_lines_in_step_order(self, demo_view):
        pipeline = fixture_pipelines()["vision"]
        lines = generate_dockerfile(pipeline, demo_view).splitlines()
        installs = [l for l in lines if l.startswith("RUN primitive-install ")]
        assert installs == [
            f"RUN primitive-install {s.primitive_id}=={s.primitive_version}"
            for s in pipeline.steps]

    def test_configured_tags(self, demo_view):
        config = ContainerConfig(nlp_tag="registry.local/nlp:7")
        text = generate_dockerfile(fixture_pipelines()["nlp"], demo_view, config)
        assert text.splitlines()[0] == "FROM registry.local/nlp:7"

    def test_fixture_pipelines_validate(self, demo_view):
        for pipeline in fixture_pipelines().values():
            profile = demo_view.get_dataset(pipeline.dataset_id)
            problem = demo_view.get_problem(pipeline.problem_id)
            assert validate_pipeline(pipeline, profile, demo_view, problem).ok


class TestPodManifest:
    @pytest.mark.parametrize("fixture_name", ["nlp", "vision", "mixed"])
    def test_golden(self, fixture_name):
        pipeline = fixture_pipelines()[fixture_name]
        golden = (GOLDEN / f"pod_{_GOLDEN_NAMES[fixture_name]}.yaml").read_text()
        assert generate_pod_manifest(pipeline, _BASE_TAGS[fixture_name]) == golden

    def test_manifest_is_valid_yaml_with_required_fields(self):
        pipeline = fixture_pipelines()["nlp"]
        doc = yaml.safe_load(generate_pod_manifest(pipeline, "img:1"))
        assert doc["apiVersion"] == "v1"
        assert doc["kind"] == "Pod"
        container = doc["spec"]["containers"][0]
        assert container["image"] == "img:1"
        assert container["volumeMounts"] == [
            {"name": "d3m-data", "mountPath": "/d3m/data"}]
        assert doc["spec"]["volumes"] == [
            {"name": "d3m-data",
             "persistentVolumeClaim": {"claimName": "d3m-data"}}]

    def test_pod_name_substitution(self):
        assert pod_name("a.b.c") == "a-b-c"
        assert len(pod_name("x" * 100)) == 63

    def test_invalid_image_ref(self):
        pipeline = fixture_pipelines()["nlp"]
        with pytest.raises(InvalidImageRefError):
            generate_pod_manifest(pipeline, "")
        with pytest.raises(InvalidImageRefError):
            generate_pod_manifest(pipeline, "has space:1")

    def test_deterministic(self):
        pipeline = fixture_pipelines()["mixed"]
        assert (generate_pod_manifest(pipeline, "img:1")
                == generate_pod_manifest(pipeline, "img:1"))

    def test_custom_mount(self):
        config = ContainerConfig(data_mount="/mnt/shared")
        text = generate_pod_manifest(fixture_pipelines()["nlp"], "img:1", config)
        assert "mountPath: /mnt/shared" in text

    def test_relative_mount_rejected(self):
        with pytest.raises(ValueError):
            ContainerConfig(data_mount="relative/path")
