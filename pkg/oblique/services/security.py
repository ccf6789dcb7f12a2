"""
API key authentication for the HTTP service.

Requests carry `Authorization: Bearer <key>`; the key is compared against
OBLIQUE_API_KEY.
"""

import secrets
from typing import Annotated

from fastapi import HTTPException, Security, status
from fastapi.security import HTTPAuthorizationCredentials, HTTPBearer

from .config import get_settings

security = HTTPBearer()


async def verify_api_key(
    credentials: Annotated[HTTPAuthorizationCredentials, Security(security)],
) -> str:
    """
    Verify the Bearer token from the Authorization header.

    Args:
        credentials (HTTPAuthorizationCredentials): Injected by FastAPI from
            the Authorization header.

    Returns:
        str: The validated API key.

    Raises:
        HTTPException: 401 Unauthorized if no key is configured or the token
            does not match it.
    """
    expected = get_settings().api_key
    if not expected or not secrets.compare_digest(credentials.credentials, expected):
        raise HTTPException(
            status_code=status.HTTP_401_UNAUTHORIZED, detail="Invalid API key"
        )
    return credentials.credentials
