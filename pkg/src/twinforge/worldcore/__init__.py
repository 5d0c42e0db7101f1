from .se3 import SE3, compose
from .inertia import SprungMass, SprungMassSet, InertiaAggregate, aggregate_inertia
from .rigidbody import RigidBodyState, step_rigid_body
from .world import Wall, World, RayHit, raycast, raycast_batch, load_world, save_world

__all__ = [
    "SE3",
    "compose",
    "SprungMass",
    "SprungMassSet",
    "InertiaAggregate",
    "aggregate_inertia",
    "RigidBodyState",
    "step_rigid_body",
    "Wall",
    "World",
    "RayHit",
    "raycast",
    "raycast_batch",
    "load_world",
    "save_world",
]
