import numpy as np
import pytest
from hypothesis import given, strategies as st

from aquatilt.frames import (
    DEFAULT_B, DEFAULT_DELTA, GeometryParams, VehicleState, quat_conjugate,
    quat_from_axis_angle, quat_from_euler, quat_identity, quat_multiply,
    quat_normalize, quat_to_euler, quat_to_matrix, rotate_body_to_world,
    rotate_world_to_body, unit_mount_frame, vec3)


def random_quat(seed):
    rng = np.random.default_rng(seed)
    return quat_normalize(rng.normal(size=4))


class TestRotations:
    def test_identity(self):
        v = vec3(1.0, 2.0, 3.0)
        np.testing.assert_allclose(rotate_body_to_world(quat_identity(), v), v)

    def test_yaw_180(self):
        q = quat_from_axis_angle(vec3(0, 0, 1), np.pi)
        out = rotate_body_to_world(q, vec3(1, 0, 0))
        np.testing.assert_allclose(out, [-1.0, 0.0, 0.0], atol=1e-12)

    @given(st.integers(0, 999))
    def test_norm_preserved(self, seed):
        rng = np.random.default_rng(seed)
        q = quat_normalize(rng.normal(size=4))
        v = rng.normal(size=3) * 10
        out = rotate_body_to_world(q, v)
        assert abs(np.linalg.norm(out) - np.linalg.norm(v)) < 1e-12

    @given(st.integers(0, 999))
    def test_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        q = quat_normalize(rng.normal(size=4))
        v = rng.normal(size=3)
        back = rotate_world_to_body(q, rotate_body_to_world(q, v))
        np.testing.assert_allclose(back, v, atol=1e-10)

    def test_denormalized_warns_and_renormalizes(self):
        q = quat_identity() * 1.5
        with pytest.warns(UserWarning, match="renormalizing"):
            out = rotate_body_to_world(q, vec3(1, 0, 0))
        np.testing.assert_allclose(out, [1.0, 0.0, 0.0])

    def test_matrix_matches_sandwich_product(self):
        q = random_quat(7)
        v = vec3(0.3, -1.2, 2.0)
        vq = np.concatenate(([0.0], v))
        sandwich = quat_multiply(quat_multiply(q, vq), quat_conjugate(q))[1:]
        np.testing.assert_allclose(quat_to_matrix(q) @ v, sandwich, atol=1e-12)

    @given(st.floats(-1.4, 1.4), st.floats(-1.4, 1.4), st.floats(-3.0, 3.0))
    def test_euler_round_trip(self, roll, pitch, yaw):
        q = quat_from_euler(roll, pitch, yaw)
        r2, p2, y2 = quat_to_euler(q)
        np.testing.assert_allclose([r2, p2, y2], [roll, pitch, yaw],
                                   atol=1e-9)


class TestMountFrames:
    def test_axis_aligned(self):
        g = GeometryParams(delta=(0.0, np.pi, np.pi / 2, -np.pi / 2))
        origin, arm, tangent = unit_mount_frame(g, 1)
        np.testing.assert_allclose(origin, [0.19, 0.0, 0.02], atol=1e-15)
        np.testing.assert_allclose(tangent, [0.0, 1.0, 0.0], atol=1e-15)

    def test_diagonal_arm(self):
        origin, _, _ = unit_mount_frame(GeometryParams(), 1)
        # 0.19 / sqrt(2)
        np.testing.assert_allclose(origin[:2], [0.13435, 0.13435], atol=5e-6)

    @pytest.mark.parametrize("i", [1, 2, 3, 4])
    def test_orthonormal_and_right_handed(self, i):
        g = GeometryParams()
        _, arm, tangent = unit_mount_frame(g, i)
        assert abs(arm @ tangent) < 1e-14
        assert abs(np.linalg.norm(arm) - 1) < 1e-14
        assert abs(np.linalg.norm(tangent) - 1) < 1e-14
        np.testing.assert_allclose(np.cross(arm, tangent), [0, 0, 1],
                                   atol=1e-14)

    def test_bad_index(self):
        with pytest.raises(ValueError):
            unit_mount_frame(GeometryParams(), 5)


class TestParams:
    def test_defaults(self):
        g = GeometryParams()
        assert g.delta == DEFAULT_DELTA
        assert g.b == DEFAULT_B
        assert g.mass == pytest.approx(1.63)
        assert g.L_p == pytest.approx(0.19)

    def test_rejects_bad_b(self):
        with pytest.raises(ValueError):
            GeometryParams(b=(1, 1, -1, 0))

    def test_rejects_indefinite_inertia(self):
        with pytest.raises(ValueError):
            GeometryParams(inertia=np.diag([1.0, -1.0, 1.0]))

    def test_state_normalized(self):
        s = VehicleState(attitude=np.array([2.0, 0.0, 0.0, 0.0]))
        assert np.linalg.norm(s.normalized().attitude) == pytest.approx(1.0)
