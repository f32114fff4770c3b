"""
Error Catalog for the deniable steganography toolkit.
Defines all standardized error codes and their meanings.
"""

# ============================================================
# MESSAGE ERRORS (MSG_*)
# ============================================================

MSG_001 = {
    'code': 'MSG_001',
    'message': 'Hex message has the wrong length for the requested bit count',
    'status': 2,
    'category': 'Message'
}

MSG_002 = {
    'code': 'MSG_002',
    'message': 'Hex message contains an invalid character',
    'status': 2,
    'category': 'Message'
}

MSG_003 = {
    'code': 'MSG_003',
    'message': 'Pad bits beyond the message length must be zero',
    'status': 2,
    'category': 'Message'
}

MSG_004 = {
    'code': 'MSG_004',
    'message': 'Messages must have equal lengths',
    'status': 2,
    'category': 'Message'
}

MSG_005 = {
    'code': 'MSG_005',
    'message': 'A message needs at least one bit, each bit 0 or 1',
    'status': 2,
    'category': 'Message'
}

# ============================================================
# IMAGE ERRORS (IMG_*)
# ============================================================

IMG_001 = {
    'code': 'IMG_001',
    'message': 'Image file not found',
    'status': 3,
    'category': 'Image'
}

IMG_002 = {
    'code': 'IMG_002',
    'message': 'Image file could not be decoded',
    'status': 5,
    'category': 'Image'
}

IMG_003 = {
    'code': 'IMG_003',
    'message': 'Image dimensions do not match',
    'status': 2,
    'category': 'Image'
}

IMG_004 = {
    'code': 'IMG_004',
    'message': 'Image is smaller than the SSIM window',
    'status': 2,
    'category': 'Image'
}

IMG_005 = {
    'code': 'IMG_005',
    'message': 'Target size must be positive',
    'status': 2,
    'category': 'Image'
}

IMG_006 = {
    'code': 'IMG_006',
    'message': 'Image tensor contains non-finite values',
    'status': 6,
    'category': 'Image'
}

IMG_007 = {
    'code': 'IMG_007',
    'message': 'Dataset directory holds no decodable images',
    'status': 3,
    'category': 'Dataset'
}

# ============================================================
# DIFFERENTIABLE ENGINE ERRORS (AD_*)
# ============================================================

AD_001 = {
    'code': 'AD_001',
    'message': 'Tensor shapes are inconsistent',
    'status': 2,
    'category': 'Engine'
}

AD_002 = {
    'code': 'AD_002',
    'message': 'Operation produced non-finite values',
    'status': 6,
    'category': 'Engine'
}

AD_003 = {
    'code': 'AD_003',
    'message': 'Batch normalization in eval mode needs running statistics',
    'status': 2,
    'category': 'Engine'
}

AD_004 = {
    'code': 'AD_004',
    'message': 'Gradient is non-finite',
    'status': 6,
    'category': 'Engine'
}

# ============================================================
# NETWORK ERRORS (NET_*)
# ============================================================

NET_001 = {
    'code': 'NET_001',
    'message': 'Number of messages does not match the decoder count',
    'status': 2,
    'category': 'Network'
}

NET_002 = {
    'code': 'NET_002',
    'message': 'Decoder index out of range',
    'status': 2,
    'category': 'Network'
}

NET_003 = {
    'code': 'NET_003',
    'message': 'Image does not match the configured model size',
    'status': 2,
    'category': 'Network'
}

# ============================================================
# LOSS ERRORS (LOSS_*)
# ============================================================

LOSS_001 = {
    'code': 'LOSS_001',
    'message': 'Balance loss needs at least two decoder losses',
    'status': 2,
    'category': 'Loss'
}

LOSS_002 = {
    'code': 'LOSS_002',
    'message': 'Loss weights must be non-negative',
    'status': 2,
    'category': 'Loss'
}

# ============================================================
# CLASSIC CONSTRUCTION ERRORS (CLS_*)
# ============================================================

CLS_001 = {
    'code': 'CLS_001',
    'message': 'Cover capacity exceeded',
    'status': 4,
    'category': 'Classic'
}

CLS_002 = {
    'code': 'CLS_002',
    'message': 'Key pad length does not match the message length',
    'status': 2,
    'category': 'Classic'
}

# ============================================================
# TRAINING ERRORS (TRN_*)
# ============================================================

TRN_001 = {
    'code': 'TRN_001',
    'message': 'Training loss became non-finite',
    'status': 6,
    'category': 'Training'
}

TRN_002 = {
    'code': 'TRN_002',
    'message': 'Batch must hold at least two images',
    'status': 2,
    'category': 'Training'
}

TRN_003 = {
    'code': 'TRN_003',
    'message': 'Scenario verification failed',
    'status': 7,
    'category': 'Scenario'
}

# ============================================================
# MODEL FILE ERRORS (FILE_*)
# ============================================================

FILE_001 = {
    'code': 'FILE_001',
    'message': 'Bad magic: not a model file',
    'status': 5,
    'category': 'Model File'
}

FILE_002 = {
    'code': 'FILE_002',
    'message': 'Unsupported model file version',
    'status': 5,
    'category': 'Model File'
}

FILE_003 = {
    'code': 'FILE_003',
    'message': 'Model file is truncated',
    'status': 5,
    'category': 'Model File'
}

FILE_004 = {
    'code': 'FILE_004',
    'message': 'Tensor dimensions overflow the file',
    'status': 5,
    'category': 'Model File'
}

FILE_005 = {
    'code': 'FILE_005',
    'message': 'Model file does not match the network layout',
    'status': 5,
    'category': 'Model File'
}

FILE_006 = {
    'code': 'FILE_006',
    'message': 'File not found',
    'status': 3,
    'category': 'Model File'
}

# ============================================================
# VALIDATION ERRORS (VAL_*)
# ============================================================

VAL_001 = {
    'code': 'VAL_001',
    'message': 'Configuration validation failed',
    'status': 2,
    'category': 'Validation'
}

VAL_002 = {
    'code': 'VAL_002',
    'message': 'Invalid field format or type',
    'status': 2,
    'category': 'Validation'
}

VAL_003 = {
    'code': 'VAL_003',
    'message': 'Unknown configuration key',
    'status': 2,
    'category': 'Validation'
}

# ============================================================
# SERVER ERRORS (SRV_*)
# ============================================================

SRV_001 = {
    'code': 'SRV_001',
    'message': 'Unexpected internal error',
    'status': 1,
    'category': 'Internal'
}

# ============================================================
# CATALOG LOOKUP
# ============================================================

ERROR_CATALOG = {
    # Message
    'MSG_001': MSG_001,
    'MSG_002': MSG_002,
    'MSG_003': MSG_003,
    'MSG_004': MSG_004,
    'MSG_005': MSG_005,
    # Image
    'IMG_001': IMG_001,
    'IMG_002': IMG_002,
    'IMG_003': IMG_003,
    'IMG_004': IMG_004,
    'IMG_005': IMG_005,
    'IMG_006': IMG_006,
    'IMG_007': IMG_007,
    # Engine
    'AD_001': AD_001,
    'AD_002': AD_002,
    'AD_003': AD_003,
    'AD_004': AD_004,
    # Network
    'NET_001': NET_001,
    'NET_002': NET_002,
    'NET_003': NET_003,
    # Loss
    'LOSS_001': LOSS_001,
    'LOSS_002': LOSS_002,
    # Classic
    'CLS_001': CLS_001,
    'CLS_002': CLS_002,
    # Training
    'TRN_001': TRN_001,
    'TRN_002': TRN_002,
    'TRN_003': TRN_003,
    # Model file
    'FILE_001': FILE_001,
    'FILE_002': FILE_002,
    'FILE_003': FILE_003,
    'FILE_004': FILE_004,
    'FILE_005': FILE_005,
    'FILE_006': FILE_006,
    # Validation
    'VAL_001': VAL_001,
    'VAL_002': VAL_002,
    'VAL_003': VAL_003,
    # Internal
    'SRV_001': SRV_001,
}


def get_error_details(error_code):
    """
    Retrieve error details by error code.

    Args:
        error_code (str): Error code (e.g., 'MSG_001')

    Returns:
        dict: Error details with code, message, status, category
    """
    return ERROR_CATALOG.get(error_code, {
        'code': 'UNKNOWN_ERROR',
        'message': 'Unknown error occurred',
        'status': 1,
        'category': 'Unknown'
    })


def list_all_errors():
    """
    List all available error codes organized by category.

    Returns:
        dict: Errors grouped by category
    """
    categories = {}
    for code, error in ERROR_CATALOG.items():
        category = error.get('category', 'Unknown')
        if category not in categories:
            categories[category] = []
        categories[category].append(error)
    return categories
