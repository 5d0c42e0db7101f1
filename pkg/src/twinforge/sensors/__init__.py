from .feedback import actuator_feedback
from .encoders import EncoderParams, encoder_read
from .ins import ImuReading, InsNoise, ins_read
from .lidar import (
    Lidar2DParams,
    Lidar3DParams,
    PointCloud,
    Scan2D,
    lidar2d_scan,
    lidar3d_scan,
)
from .camera import CameraParams, camera_project

__all__ = [
    "actuator_feedback",
    "EncoderParams",
    "encoder_read",
    "ImuReading",
    "InsNoise",
    "ins_read",
    "Lidar2DParams",
    "Lidar3DParams",
    "PointCloud",
    "Scan2D",
    "lidar2d_scan",
    "lidar3d_scan",
    "CameraParams",
    "camera_project",
]
